"""Truncated two-index coefficient lattices and the unit-modulus twist parameter.

A ``CoeffLattice2`` stores complex coefficients f_{k,l} on the box
[-radius_k, radius_k] x [-radius_l, radius_l]; reads outside the box are
exactly zero.  The box is the element: no operation infers decay, and
products enlarge the box instead of truncating.  ``PhaseQ`` is the twist
q = e^{i theta}, tagged rational (theta = 2*pi*p/N with gcd(p, N) = 1,
so N is the minimal period of q) or irrational (any real theta).

All values are immutable after construction and every function here is
pure, so concurrent use on shared inputs is safe.  Reductions run in
lexicographic index order (k ascending, then l ascending) so results are
bit-reproducible regardless of thread count.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

__all__ = [
    "PhaseQ",
    "CoeffLattice2",
    "seminorm",
    "to_primed",
    "retruncate",
    "read_json",
    "write_json",
    "lattice_to_obj",
    "lattice_from_obj",
    "phaseq_to_obj",
    "phaseq_from_obj",
    "LatticeFormatError",
]

_TAU = 2.0 * math.pi


class LatticeFormatError(ValueError):
    """Malformed serialized lattice or phase document."""


def _wrap_angle(theta: float) -> float:
    # representative in (-pi, pi]; the half-power branch below depends on it
    r = math.remainder(theta, _TAU)
    if r <= -math.pi:
        r += _TAU
    return r


@dataclass(frozen=True)
class PhaseQ:
    """Unit-modulus twist q = e^{i theta}.

    Use :meth:`rational` or :meth:`irrational` to construct.  Rational
    values keep (p, N) in lowest terms with 0 <= p < N, so integer powers
    of q reduce exactly mod N before any floating evaluation.
    """

    kind: str
    p: int = 0
    modulus: int = 1
    theta_value: float = 0.0

    @staticmethod
    def rational(p: int, n: int) -> "PhaseQ":
        if n <= 0:
            raise ValueError("modulus must be a positive integer")
        p = p % n
        g = math.gcd(p, n)
        if g > 1:
            p //= g
            n //= g
        return PhaseQ(kind="rational", p=p, modulus=n, theta_value=_TAU * p / n)

    @staticmethod
    def irrational(theta: float) -> "PhaseQ":
        theta = float(theta)
        if not math.isfinite(theta):
            raise ValueError("theta must be finite")
        return PhaseQ(kind="irrational", theta_value=_wrap_angle(theta))

    @property
    def theta(self) -> float:
        return self.theta_value

    @property
    def q(self) -> complex:
        return self.pow(1)

    def pow(self, n: int) -> complex:
        """q**n, with exact exponent reduction mod N for rational kind."""
        if self.kind == "rational":
            e = (self.p * n) % self.modulus
            return cmath.exp(2j * math.pi * e / self.modulus)
        return cmath.exp(1j * self.theta_value * n)

    def half_pow(self, n: int) -> complex:
        """q**(n/2) on the branch e^{i theta/2} with theta the stored angle."""
        if self.kind == "rational":
            e = (self.p * n) % (2 * self.modulus)
            return cmath.exp(1j * math.pi * e / self.modulus)
        return cmath.exp(0.5j * self.theta_value * n)

    def pow_array(self, exponents: np.ndarray) -> np.ndarray:
        """Vectorized q**e over an integer array of exponents."""
        e = np.asarray(exponents, dtype=np.int64)
        if self.kind == "rational":
            r = (self.p * e) % self.modulus
            return np.exp(2j * np.pi * r / self.modulus)
        return np.exp(1j * self.theta_value * e)

    def half_pow_array(self, exponents: np.ndarray) -> np.ndarray:
        e = np.asarray(exponents, dtype=np.int64)
        if self.kind == "rational":
            r = (self.p * e) % (2 * self.modulus)
            return np.exp(1j * np.pi * r / self.modulus)
        return np.exp(0.5j * self.theta_value * e)

    def conjugate(self) -> "PhaseQ":
        if self.kind == "rational":
            return PhaseQ.rational(-self.p, self.modulus)
        return PhaseQ.irrational(-self.theta_value)


def phaseq_to_obj(q: PhaseQ) -> dict:
    if q.kind == "rational":
        return {"rational": [q.p, q.modulus]}
    return {"theta": q.theta_value}


def phaseq_from_obj(obj) -> PhaseQ:
    if not isinstance(obj, dict):
        raise LatticeFormatError(f"phase must be an object, got {type(obj).__name__}")
    if "rational" in obj:
        pair = obj["rational"]
        if not (isinstance(pair, list) and len(pair) == 2):
            raise LatticeFormatError('field "rational" must be a pair [p, N]')
        p, n = pair
        if not (isinstance(p, int) and isinstance(n, int)):
            raise LatticeFormatError('field "rational" entries must be integers')
        return PhaseQ.rational(p, n)
    if "theta" in obj:
        t = obj["theta"]
        if not isinstance(t, (int, float)) or not math.isfinite(float(t)):
            raise LatticeFormatError('field "theta" must be a finite number')
        return PhaseQ.irrational(float(t))
    raise LatticeFormatError('phase object needs a "rational" or "theta" field')


@dataclass(frozen=True)
class CoeffLattice2:
    """Complex coefficients on [-radius_k, radius_k] x [-radius_l, radius_l]."""

    radius_k: int
    radius_l: int
    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.radius_k < 0 or self.radius_l < 0:
            raise ValueError("radii must be non-negative")
        arr = np.asarray(self.coeffs, dtype=np.complex128)
        want = (2 * self.radius_k + 1, 2 * self.radius_l + 1)
        if arr.shape != want:
            raise ValueError(f"coefficient array shape {arr.shape} != {want}")
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "coeffs", arr)

    # -- construction -------------------------------------------------

    @staticmethod
    def zeros(radius_k: int, radius_l: int) -> "CoeffLattice2":
        return CoeffLattice2(radius_k, radius_l,
                             np.zeros((2 * radius_k + 1, 2 * radius_l + 1), dtype=np.complex128))

    @staticmethod
    def delta(k: int, l: int, value: complex = 1.0,
              radius_k: int | None = None, radius_l: int | None = None) -> "CoeffLattice2":
        rk = abs(k) if radius_k is None else radius_k
        rl = abs(l) if radius_l is None else radius_l
        arr = np.zeros((2 * rk + 1, 2 * rl + 1), dtype=np.complex128)
        arr[k + rk, l + rl] = value
        return CoeffLattice2(rk, rl, arr)

    @staticmethod
    def from_entries(entries: dict) -> "CoeffLattice2":
        if not entries:
            return CoeffLattice2.zeros(0, 0)
        rk = max(abs(k) for k, _ in entries)
        rl = max(abs(l) for _, l in entries)
        arr = np.zeros((2 * rk + 1, 2 * rl + 1), dtype=np.complex128)
        for (k, l), v in entries.items():
            arr[k + rk, l + rl] += v
        return CoeffLattice2(rk, rl, arr)

    # -- access -------------------------------------------------------

    def get(self, k: int, l: int) -> complex:
        if abs(k) > self.radius_k or abs(l) > self.radius_l:
            return 0.0 + 0.0j
        return complex(self.coeffs[k + self.radius_k, l + self.radius_l])

    def k_range(self) -> np.ndarray:
        return np.arange(-self.radius_k, self.radius_k + 1)

    def l_range(self) -> np.ndarray:
        return np.arange(-self.radius_l, self.radius_l + 1)

    def support(self) -> Iterator[tuple[int, int, complex]]:
        """Nonzero entries in lexicographic order (k ascending, then l)."""
        for i in range(self.coeffs.shape[0]):
            for j in range(self.coeffs.shape[1]):
                c = self.coeffs[i, j]
                if c != 0:
                    yield i - self.radius_k, j - self.radius_l, complex(c)

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.coeffs))) if self.coeffs.size else 0.0

    # -- arithmetic (box grows to the union; coefficients exact) -------

    def _embedded(self, rk: int, rl: int) -> np.ndarray:
        out = np.zeros((2 * rk + 1, 2 * rl + 1), dtype=np.complex128)
        out[rk - self.radius_k: rk + self.radius_k + 1,
            rl - self.radius_l: rl + self.radius_l + 1] = self.coeffs
        return out

    def expanded(self, radius_k: int, radius_l: int) -> "CoeffLattice2":
        """Zero-pad out to at least the given radii (never shrinks)."""
        rk = max(radius_k, self.radius_k)
        rl = max(radius_l, self.radius_l)
        return CoeffLattice2(rk, rl, self._embedded(rk, rl))

    def __add__(self, other: "CoeffLattice2") -> "CoeffLattice2":
        rk = max(self.radius_k, other.radius_k)
        rl = max(self.radius_l, other.radius_l)
        return CoeffLattice2(rk, rl, self._embedded(rk, rl) + other._embedded(rk, rl))

    def __sub__(self, other: "CoeffLattice2") -> "CoeffLattice2":
        rk = max(self.radius_k, other.radius_k)
        rl = max(self.radius_l, other.radius_l)
        return CoeffLattice2(rk, rl, self._embedded(rk, rl) - other._embedded(rk, rl))

    def scaled(self, a: complex) -> "CoeffLattice2":
        return CoeffLattice2(self.radius_k, self.radius_l, self.coeffs * a)

    def __neg__(self) -> "CoeffLattice2":
        return self.scaled(-1.0)

    def max_abs_diff(self, other: "CoeffLattice2") -> float:
        rk = max(self.radius_k, other.radius_k)
        rl = max(self.radius_l, other.radius_l)
        d = self._embedded(rk, rl) - other._embedded(rk, rl)
        return float(np.max(np.abs(d))) if d.size else 0.0


def seminorm(f: CoeffLattice2, m: int) -> float:
    """sup over the box of |f_{k,l}| * (1 + |k| + |l|)**m."""
    if m < 0:
        raise ValueError("seminorm order must be non-negative")
    kk = np.abs(f.k_range())[:, None]
    ll = np.abs(f.l_range())[None, :]
    w = (1.0 + kk + ll) ** m
    return float(np.max(np.abs(f.coeffs) * w))


def to_primed(f: CoeffLattice2, q: PhaseQ) -> CoeffLattice2:
    """Multiply each coefficient by q**(k*l/2) on the principal half-power branch."""
    kk = f.k_range()[:, None]
    ll = f.l_range()[None, :]
    return CoeffLattice2(f.radius_k, f.radius_l, f.coeffs * q.half_pow_array(kk * ll))


def retruncate(f: CoeffLattice2, radius_k: int, radius_l: int) -> tuple[CoeffLattice2, float]:
    """Cut down to the given box; returns (g, sup|discarded coefficient|).

    Truncation is opt-in: nothing else in this module ever drops
    coefficients silently.
    """
    rk = min(radius_k, f.radius_k)
    rl = min(radius_l, f.radius_l)
    inner = f.coeffs[f.radius_k - rk: f.radius_k + rk + 1,
                     f.radius_l - rl: f.radius_l + rl + 1]
    g = CoeffLattice2(rk, rl, inner)
    mask = np.ones(f.coeffs.shape, dtype=bool)
    mask[f.radius_k - rk: f.radius_k + rk + 1,
         f.radius_l - rl: f.radius_l + rl + 1] = False
    tail = float(np.max(np.abs(f.coeffs[mask]))) if mask.any() else 0.0
    return g, tail


# -- serialization ------------------------------------------------------
# {"radius_k": int, "radius_l": int, "coeffs": [[re, im], ...]}
# row-major: k from -radius_k to +radius_k outer, l inner.

def lattice_to_obj(f: CoeffLattice2) -> dict:
    flat = f.coeffs.reshape(-1)
    return {
        "radius_k": f.radius_k,
        "radius_l": f.radius_l,
        "coeffs": [[float(c.real), float(c.imag)] for c in flat],
    }


def lattice_from_obj(obj) -> CoeffLattice2:
    if not isinstance(obj, dict):
        raise LatticeFormatError(f"lattice must be an object, got {type(obj).__name__}")
    for key in ("radius_k", "radius_l", "coeffs"):
        if key not in obj:
            raise LatticeFormatError(f'missing field "{key}"')
    rk, rl = obj["radius_k"], obj["radius_l"]
    if not (isinstance(rk, int) and isinstance(rl, int)) or rk < 0 or rl < 0:
        raise LatticeFormatError('"radius_k" and "radius_l" must be non-negative integers')
    rows, cols = 2 * rk + 1, 2 * rl + 1
    raw = obj["coeffs"]
    if not isinstance(raw, list):
        raise LatticeFormatError('"coeffs" must be a list')
    if len(raw) != rows * cols:
        raise LatticeFormatError(
            f'"coeffs" has {len(raw)} entries, box ({rk},{rl}) expects {rows * cols}')
    arr = np.empty(rows * cols, dtype=np.complex128)
    for i, pair in enumerate(raw):
        if not (isinstance(pair, list) and len(pair) == 2
                and all(isinstance(x, (int, float)) for x in pair)):
            raise LatticeFormatError(f"coeffs[{i}] must be a [re, im] pair")
        re, im = float(pair[0]), float(pair[1])
        if not (math.isfinite(re) and math.isfinite(im)):
            k, l = divmod(i, cols)
            raise LatticeFormatError(
                f"coeffs[{i}] (k={k - rk}, l={l - rl}) is not finite")
        arr[i] = complex(re, im)
    return CoeffLattice2(rk, rl, arr.reshape(rows, cols))


def read_json(data: bytes | str) -> CoeffLattice2:
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        obj = json.loads(data)
    except json.JSONDecodeError as e:
        raise LatticeFormatError(
            f"invalid JSON at line {e.lineno} column {e.colno}: {e.msg}") from e
    return lattice_from_obj(obj)


def write_json(f: CoeffLattice2) -> bytes:
    return json.dumps(lattice_to_obj(f)).encode("utf-8")
