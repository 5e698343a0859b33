"""Finite matrix realization of the rational-q torus and the circle of slope b/a.

For q = e^{2pi i p/N} the clock and shift matrices U0, V0 generate Mat_N
and satisfy U0 V0 = q V0 U0, U0^N = V0^N = I.  A torus element becomes a
matrix-valued function of the fiber point (u, v) on the unit bidisk
boundary through U -> u U0, V -> v V0; this evaluation is multiplicative
and *-preserving, which is the whole point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .lattice import PhaseQ
from .parallel import ordered_map
from .torus import TorusElement

__all__ = [
    "clock_shift",
    "eval_section",
    "section_family",
    "equivariance_check",
    "covariance_residual",
    "fiber_grid",
    "homomorphism_residual",
    "star_residual",
    "center_scalar_residual",
    "CircleSpec",
    "circle_eval",
    "circle_check_relations",
    "opnorm",
]


def _require_rational(q: PhaseQ) -> int:
    if q.kind != "rational":
        raise ValueError("matrix realization needs rational q = e^{2pi i p/N}")
    return q.modulus


def clock_shift(q: PhaseQ) -> tuple[np.ndarray, np.ndarray]:
    """Shift U0 (ones on the superdiagonal wrap) and clock V0 = diag(q^j)."""
    n = _require_rational(q)
    u0 = np.zeros((n, n), dtype=np.complex128)
    for i in range(n):
        u0[i, (i + 1) % n] = 1.0
    v0 = np.diag(q.pow_array(np.arange(n)))
    return u0, v0


def opnorm(m: np.ndarray, iterations: int = 50) -> float:
    """Largest singular value by power iteration on M^dagger M.

    Fixed all-ones start keeps the estimate deterministic; adequate for
    the small matrices checked here.
    """
    m = np.asarray(m, dtype=np.complex128)
    if m.size == 0:
        return 0.0
    h = m.conj().T @ m
    x = np.ones(h.shape[0], dtype=np.complex128) / math.sqrt(h.shape[0])
    lam = 0.0
    for _ in range(iterations):
        y = h @ x
        nrm = float(np.linalg.norm(y))
        if nrm == 0.0:
            return 0.0
        x = y / nrm
        lam = nrm
    return math.sqrt(lam)


def eval_section(f: TorusElement, u: complex, v: complex) -> np.ndarray:
    """Sum f_{k,l} u^k v^l U0^{k mod N} V0^{l mod N}.

    U0^a V0^b is the matrix with q^{b((i+a) mod N)} at (i, (i+a) mod N),
    so each lattice point is a single scatter; no matrix products.
    """
    n = _require_rational(f.q)
    for name, w in (("u", u), ("v", v)):
        if abs(abs(w) - 1.0) > 1e-12:
            raise ValueError(f"{name} must be unit modulus, got |{name}|={abs(w)!r}")
    q = f.q
    out = np.zeros((n, n), dtype=np.complex128)
    rows = np.arange(n)
    for k, l, c in f.coeffs.support():
        a = k % n
        b = l % n
        cols = (rows + a) % n
        out[rows, cols] += (c * (u ** k) * (v ** l)) * q.pow_array(b * cols)
    return out


def section_family(f: TorusElement) -> dict[tuple[int, int, int, int], complex]:
    """Indexed family c_{k,l,s,t} of the re-expanded section of f.

    The (u,v)-expansion of eval_section puts f_{k,l} at matrix word
    (s,t) = (k mod N, l mod N); every other (s,t) coefficient is zero.
    """
    n = _require_rational(f.q)
    fam: dict[tuple[int, int, int, int], complex] = {}
    for k, l, c in f.coeffs.support():
        fam[(k, l, k % n, l % n)] = c
    return fam


def equivariance_check(family: dict[tuple[int, int, int, int], complex],
                       q: PhaseQ) -> tuple[bool, tuple[int, int, int, int] | None]:
    """ok iff every nonzero c_{k,l,s,t} has k = s and l = t mod N."""
    n = _require_rational(q)
    for key in sorted(family):
        if family[key] == 0:
            continue
        k, l, s, t = key
        if not (0 <= s < n and 0 <= t < n):
            raise ValueError(f"word indices out of range at {key}")
        if (k - s) % n != 0 or (l - t) % n != 0:
            return False, key
    return True, None


def covariance_residual(f: TorusElement, u: complex, v: complex,
                        m: int, n_shift: int) -> float:
    """Z_N x Z_N action: moving the fiber by (q^m, q^n) conjugates the value."""
    q = f.q
    u0, v0 = clock_shift(q)
    lhs = eval_section(f, q.pow(m) * u, q.pow(n_shift) * v)
    mid = eval_section(f, u, v)
    un = np.linalg.matrix_power(u0, n_shift % q.modulus)
    vm = np.linalg.matrix_power(v0, m % q.modulus)
    rhs = un @ vm.conj().T @ mid @ vm @ un.conj().T
    return opnorm(lhs - rhs)


def fiber_grid(count: int = 16) -> list[tuple[complex, complex]]:
    """count x count unit pairs, offset by irrational rotations so the grid
    never lands on special symmetry points of any small-N root lattice."""
    off_u = (math.sqrt(5.0) - 1.0) / 2.0
    off_v = math.sqrt(2.0) - 1.0
    us = [complex(np.exp(2j * np.pi * (j + off_u) / count)) for j in range(count)]
    vs = [complex(np.exp(2j * np.pi * (j + off_v) / count)) for j in range(count)]
    return [(u, v) for u in us for v in vs]


def homomorphism_residual(f: TorusElement, g: TorusElement, fg: TorusElement,
                          grid: list[tuple[complex, complex]]) -> float:
    """max over fibers of ||eval(fg) - eval(f) eval(g)||; parallel over fibers,
    reduced in grid order."""
    def one(pt: tuple[complex, complex]) -> float:
        u, v = pt
        return opnorm(eval_section(fg, u, v)
                      - eval_section(f, u, v) @ eval_section(g, u, v))
    return max(ordered_map(one, grid), default=0.0)


def star_residual(f: TorusElement, fstar: TorusElement,
                  grid: list[tuple[complex, complex]]) -> float:
    def one(pt: tuple[complex, complex]) -> float:
        u, v = pt
        return opnorm(eval_section(fstar, u, v) - eval_section(f, u, v).conj().T)
    return max(ordered_map(one, grid), default=0.0)


def center_scalar_residual(f: TorusElement,
                           grid: list[tuple[complex, complex]]) -> float:
    """Distance of eval_section(f) from scalar matrices, maximized over fibers.

    Central elements (support on N Z x N Z) must land in C I.
    """
    n = _require_rational(f.q)
    eye = np.eye(n)

    def one(pt: tuple[complex, complex]) -> float:
        u, v = pt
        m = eval_section(f, u, v)
        return opnorm(m - (np.trace(m) / n) * eye)
    return max(ordered_map(one, grid), default=0.0)


# -- noncommutative circle of slope b/a ---------------------------------

@dataclass(frozen=True)
class CircleSpec:
    """Generators U, V, central Z with U^N = Z^a, V^N = Z^b, Z = U^{Na'}V^{Nb'}."""

    a: int
    b: int
    a_prime: int
    b_prime: int
    q: PhaseQ

    def __post_init__(self):
        _require_rational(self.q)
        if math.gcd(self.a, self.b) != 1:
            raise ValueError(f"need gcd(a,b)=1, got ({self.a},{self.b})")
        if self.a * self.a_prime + self.b * self.b_prime != 1:
            raise ValueError("need a*a' + b*b' = 1 exactly")


def _fiber_generators(spec: CircleSpec, z: complex):
    if abs(abs(z) - 1.0) > 1e-12:
        raise ValueError(f"z must be unit modulus, got |z|={abs(z)!r}")
    u0, v0 = clock_shift(spec.q)
    n = spec.q.modulus
    u = (z ** spec.a) * u0
    v = (z ** spec.b) * v0
    zc = (z ** n) * np.eye(n, dtype=np.complex128)
    return u, v, zc


def circle_eval(coeffs: dict[tuple[int, int, int], complex], spec: CircleSpec,
                z: complex) -> np.ndarray:
    """Sum c_{j,s,t} Z^j U^s V^t at the fiber z, with Z = z^N, U = z^a U0, V = z^b V0."""
    n = spec.q.modulus
    u0, v0 = clock_shift(spec.q)
    out = np.zeros((n, n), dtype=np.complex128)
    upow = [np.linalg.matrix_power(u0, s) for s in range(n)]
    vpow = [np.linalg.matrix_power(v0, t) for t in range(n)]
    for key in sorted(coeffs):
        j, s, t = key
        if not (0 <= s < n and 0 <= t < n):
            raise ValueError(f"exponents (s,t) must lie in [0,{n - 1}], got {key}")
        c = coeffs[key]
        if c == 0:
            continue
        out += c * (z ** (j * n + spec.a * s + spec.b * t)) * (upow[s] @ vpow[t])
    return out


def _int_matrix_power(m: np.ndarray, k: int) -> np.ndarray:
    # unitary m, so negative powers are conjugate-transpose powers
    if k >= 0:
        return np.linalg.matrix_power(m, k)
    return np.linalg.matrix_power(m.conj().T, -k)


def circle_check_relations(spec: CircleSpec, samples: list[complex]) -> float:
    """Max operator-norm residual of the five defining relations over the samples."""
    n = spec.q.modulus
    q1 = spec.q.q

    def one(z: complex) -> float:
        u, v, zc = _fiber_generators(spec, z)
        rs = [
            opnorm(u @ v - q1 * (v @ u)),
            opnorm(zc @ u - u @ zc),
            opnorm(zc @ v - v @ zc),
            opnorm(_int_matrix_power(u, n) - _int_matrix_power(zc, spec.a)),
            opnorm(_int_matrix_power(v, n) - _int_matrix_power(zc, spec.b)),
            opnorm(zc - _int_matrix_power(u, n * spec.a_prime)
                   @ _int_matrix_power(v, n * spec.b_prime)),
        ]
        return max(rs)
    return max(ordered_map(one, samples), default=0.0)
