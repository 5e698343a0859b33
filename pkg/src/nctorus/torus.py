"""q-twisted torus algebra on truncated coefficient lattices.

Elements are finite sums f = Sum f_{k,l} U^k V^l with UV = qVU and
U* = U^{-1}, V* = V^{-1}.  Normal order is U-powers left of V-powers;
the product, adjoint, trace, basic derivations, the derivation-relation
check with Leibniz extension, and the higher-torus reordering phase all
live here.  Everything is exact in the coefficients: products enlarge
the box, nothing is dropped.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .lattice import CoeffLattice2, PhaseQ

__all__ = [
    "TorusElement",
    "DerivationSpec",
    "DerivationCheck",
    "PhaseMismatchError",
    "unit",
    "monomial",
    "q_mul",
    "adjoint",
    "trace",
    "l2_state",
    "d_power",
    "inner_derivation",
    "check_derivation_relation",
    "apply_derivation",
    "smooth_seminorm",
    "reorder_phase",
]


class PhaseMismatchError(ValueError):
    """Operands carry different twist parameters."""


@dataclass(frozen=True)
class TorusElement:
    coeffs: CoeffLattice2
    q: PhaseQ

    def get(self, k: int, l: int) -> complex:
        return self.coeffs.get(k, l)

    def __add__(self, other: "TorusElement") -> "TorusElement":
        _require_same_q(self, other)
        return TorusElement(self.coeffs + other.coeffs, self.q)

    def __sub__(self, other: "TorusElement") -> "TorusElement":
        _require_same_q(self, other)
        return TorusElement(self.coeffs - other.coeffs, self.q)

    def scaled(self, a: complex) -> "TorusElement":
        return TorusElement(self.coeffs.scaled(a), self.q)

    def max_abs_diff(self, other: "TorusElement") -> float:
        return self.coeffs.max_abs_diff(other.coeffs)


def _require_same_q(f: TorusElement, g: TorusElement) -> None:
    a, b = f.q, g.q
    same = (a.kind == b.kind
            and ((a.kind == "rational" and (a.p, a.modulus) == (b.p, b.modulus))
                 or (a.kind == "irrational" and a.theta_value == b.theta_value)))
    if not same:
        raise PhaseMismatchError(f"q mismatch: {a} vs {b}")


def unit(q: PhaseQ) -> TorusElement:
    return TorusElement(CoeffLattice2.delta(0, 0), q)


def monomial(k: int, l: int, q: PhaseQ, value: complex = 1.0) -> TorusElement:
    """value * U^k V^l."""
    return TorusElement(CoeffLattice2.delta(k, l, value), q)


def q_mul(f: TorusElement, g: TorusElement) -> TorusElement:
    """(fg)_{k,l} = Sum_{m,n} f_{m,n} g_{k-m,l-n} q^{-n(k-m)}.

    Accumulation order is the lexicographic support order of f, so the
    result is bit-identical regardless of thread count upstream.
    """
    _require_same_q(f, g)
    q = f.q
    fc, gc = f.coeffs, g.coeffs
    rk = fc.radius_k + gc.radius_k
    rl = fc.radius_l + gc.radius_l
    out = np.zeros((2 * rk + 1, 2 * rl + 1), dtype=np.complex128)
    gk = gc.k_range()
    # phase over g's k-offset depends only on n; cache per column index of f
    phase_cache: dict[int, np.ndarray] = {}
    for m, n, c in fc.support():
        ph = phase_cache.get(n)
        if ph is None:
            ph = q.pow_array(-n * gk)[:, None]
            phase_cache[n] = ph
        i = m + fc.radius_k
        j = n + fc.radius_l
        out[i: i + 2 * gc.radius_k + 1, j: j + 2 * gc.radius_l + 1] += c * (ph * gc.coeffs)
    return TorusElement(CoeffLattice2(rk, rl, out), q)


def adjoint(f: TorusElement) -> TorusElement:
    """(f*)_{k,l} = conj(f_{-k,-l}) q^{-kl}."""
    fc = f.coeffs
    kk = fc.k_range()[:, None]
    ll = fc.l_range()[None, :]
    rev = np.conj(fc.coeffs[::-1, ::-1])
    return TorusElement(CoeffLattice2(fc.radius_k, fc.radius_l,
                                      rev * f.q.pow_array(-kk * ll)), f.q)


def trace(f: TorusElement) -> complex:
    return f.coeffs.get(0, 0)


def l2_state(f: TorusElement) -> float:
    return float(np.sqrt(np.sum(np.abs(f.coeffs.coeffs) ** 2)))


def d_power(f: TorusElement, m: int, n: int) -> TorusElement:
    """Coefficient-wise multiplication by k^m l^n, with 0^0 = 1."""
    if m < 0 or n < 0:
        raise ValueError("derivation powers must be non-negative")
    fc = f.coeffs
    kw = np.ones(2 * fc.radius_k + 1) if m == 0 else fc.k_range().astype(np.float64) ** m
    lw = np.ones(2 * fc.radius_l + 1) if n == 0 else fc.l_range().astype(np.float64) ** n
    return TorusElement(CoeffLattice2(fc.radius_k, fc.radius_l,
                                      fc.coeffs * kw[:, None] * lw[None, :]), f.q)


def inner_derivation(a: TorusElement, f: TorusElement) -> TorusElement:
    """ad(a) f = a f - f a."""
    return q_mul(a, f) - q_mul(f, a)


@dataclass(frozen=True)
class DerivationSpec:
    """A candidate derivation given by its values on the generators."""

    du_value: CoeffLattice2
    dv_value: CoeffLattice2
    q: PhaseQ

    @staticmethod
    def from_inner(a: TorusElement) -> "DerivationSpec":
        u = monomial(1, 0, a.q)
        v = monomial(0, 1, a.q)
        return DerivationSpec(inner_derivation(a, u).coeffs,
                              inner_derivation(a, v).coeffs, a.q)


@dataclass(frozen=True)
class DerivationCheck:
    ok: bool
    max_residual: float
    first_violation: tuple[int, int] | None
    tol: float


def check_derivation_relation(d: DerivationSpec, tol: float = 1e-10) -> DerivationCheck:
    """Evaluate u_{k,l-1}(1-q^{1-k}) + v_{k-1,l}(1-q^{1-l}) over both boxes.

    The relation is what applying the candidate D to UV = qVU demands;
    scan range is the union box plus margin 1, outside which every term
    is identically zero.
    """
    u, v, q = d.du_value, d.dv_value, d.q
    rk = max(u.radius_k, v.radius_k) + 2
    rl = max(u.radius_l, v.radius_l) + 2
    worst = 0.0
    first: tuple[int, int] | None = None
    for k in range(-rk, rk + 1):
        cu = 1.0 - q.pow(1 - k)
        for l in range(-rl, rl + 1):
            r = abs(u.get(k, l - 1) * cu + v.get(k - 1, l) * (1.0 - q.pow(1 - l)))
            if r > worst:
                worst = r
            if r > tol and first is None:
                first = (k, l)
    return DerivationCheck(worst <= tol, worst, first, tol)


def _d_upower(value: TorusElement, gen_k: int, gen_l: int, power: int,
              q: PhaseQ) -> TorusElement:
    """Leibniz value of D on (U^{gen_k}V^{gen_l})^power, for a single generator.

    Only called with gen = U (1,0) or V (0,1).  Negative powers go through
    D(g^{-1}) = -g^{-1} D(g) g^{-1}, the form Leibniz forces on g g^{-1} = 1.
    """
    zero = TorusElement(CoeffLattice2.zeros(0, 0), q)
    if power == 0:
        return zero
    if power > 0:
        step, base = value, 1
    else:
        g_inv = monomial(-gen_k, -gen_l, q)
        step = q_mul(q_mul(g_inv, value), g_inv).scaled(-1.0)
        base = -1
    total = zero
    m = abs(power)
    for j in range(m):
        left = monomial(base * gen_k * j, base * gen_l * j, q)
        right = monomial(base * gen_k * (m - 1 - j), base * gen_l * (m - 1 - j), q)
        total = total + q_mul(q_mul(left, step), right)
    return total


def apply_derivation(d: DerivationSpec, f: TorusElement,
                     tol: float = 1e-10) -> TorusElement:
    """Extend d to f by the Leibniz rule: D(U^kV^l) = D(U^k)V^l + U^k D(V^l)."""
    chk = check_derivation_relation(d, tol)
    if not chk.ok:
        raise ValueError(
            f"derivation relation violated at {chk.first_violation} "
            f"with residual {chk.max_residual:.3e} > {tol:.1e}")
    _require_same_q(TorusElement(d.du_value, d.q), f)
    q = d.q
    a = TorusElement(d.du_value, q)
    b = TorusElement(d.dv_value, q)
    total = TorusElement(CoeffLattice2.zeros(0, 0), q)
    for k, l, c in f.coeffs.support():
        du_k = _d_upower(a, 1, 0, k, q)
        dv_l = _d_upower(b, 0, 1, l, q)
        term = q_mul(du_k, monomial(0, l, q)) + q_mul(monomial(k, 0, q), dv_l)
        total = total + term.scaled(c)
    return total


def smooth_seminorm(f: TorusElement, word: Sequence[tuple[int, int]],
                    state: str | Callable[[TorusElement], complex] = "trace") -> float:
    """nu(X_1 ... X_p f) with X_i = D_U^{m_i} D_V^{n_i} and nu from the state.

    state "trace" evaluates the l2 value sqrt(tr(f* f)); a callable phi is
    treated as a positive form, giving sqrt(Re phi(f* f)).
    """
    g = f
    for m, n in word:
        g = d_power(g, m, n)
    if state == "trace":
        return l2_state(g)
    if callable(state):
        val = complex(state(q_mul(adjoint(g), g)))
        return math.sqrt(max(val.real, 0.0))
    raise ValueError('state must be "trace" or a callable form')


def reorder_phase(word: Sequence[int], q: PhaseQ,
                  n: int | None = None) -> tuple[np.ndarray, complex]:
    """Normal-order a word in generators S_1..S_n with S_i S_{i+1} = q S_{i+1} S_i.

    word entries are signed indices: +i for S_i, -i for S_i^{-1}.  Returns
    the exponent vector of S_1^{k_1}..S_n^{k_n} and the accumulated phase.
    Uses stable adjacent transpositions only, so the two relations (twist
    for neighbours, commute for |i-j| >= 2) are the single source of truth.
    """
    letters = []
    for w in word:
        if not isinstance(w, int) or w == 0:
            raise ValueError(f"word entries are nonzero signed integers, got {w!r}")
        letters.append((abs(w), 1 if w > 0 else -1))
    if n is None:
        n = max((idx for idx, _ in letters), default=1)
    if any(idx > n for idx, _ in letters):
        raise ValueError("generator index exceeds n")
    phase_exp = 0
    changed = True
    while changed:
        changed = False
        for i in range(len(letters) - 1):
            (ia, sa), (ib, sb) = letters[i], letters[i + 1]
            if ia > ib:
                # S_a^sa S_b^sb = q^{-sa*sb} S_b^sb S_a^sa when a = b+1
                if ia == ib + 1:
                    phase_exp -= sa * sb
                letters[i], letters[i + 1] = letters[i + 1], letters[i]
                changed = True
    exps = np.zeros(n, dtype=np.int64)
    for idx, s in letters:
        exps[idx - 1] += s
    return exps, q.pow(phase_exp)
