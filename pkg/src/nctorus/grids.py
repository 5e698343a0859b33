"""Uniformly sampled complex functions on an interval / rectangle.

These stand in for rapidly decaying smooth functions: every integral
operator in the package assumes the values are negligible at the box
edge, and callers get a warning (never silent corruption) when that
fails.  Sample points are u_j = -L + j*(2L/n) with n a power of two, so
FFT-based spectral calculus applies directly.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "GridFunction1D",
    "GridFunction2D",
    "GridMismatchError",
    "GridFormatError",
    "require_same_grid",
    "gaussian_1d",
    "gaussian_2d",
    "check_decay_1d",
    "check_decay_2d",
    "fourier_2d",
    "inverse_fourier_2d",
    "grid1d_to_obj",
    "grid1d_from_obj",
    "grid2d_to_obj",
    "grid2d_from_obj",
]


class GridMismatchError(ValueError):
    """Operands sampled on different grids."""


class GridFormatError(ValueError):
    """Malformed serialized grid document."""


def _check_count(n: int, name: str) -> None:
    if n < 8 or (n & (n - 1)) != 0:
        raise ValueError(f"{name} must be a power of two >= 8, got {n}")


@dataclass(frozen=True)
class GridFunction1D:
    half_extent: float
    n: int
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        if not (self.half_extent > 0):
            raise ValueError("half_extent must be positive")
        _check_count(self.n, "n")
        v = np.asarray(self.values, dtype=np.complex128)
        if v.shape != (self.n,):
            raise ValueError(f"values shape {v.shape} != ({self.n},)")
        if not (np.all(np.isfinite(v.real)) and np.all(np.isfinite(v.imag))):
            raise ValueError("values must be finite")
        v = v.copy()
        v.flags.writeable = False
        object.__setattr__(self, "values", v)

    @property
    def dx(self) -> float:
        return 2.0 * self.half_extent / self.n

    def axis(self) -> np.ndarray:
        return -self.half_extent + self.dx * np.arange(self.n)

    def freqs(self) -> np.ndarray:
        return 2.0 * np.pi * np.fft.fftfreq(self.n, d=self.dx)

    def with_values(self, values: np.ndarray) -> "GridFunction1D":
        return GridFunction1D(self.half_extent, self.n, values)

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.values) ** 2) * self.dx))

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.values)))

    def same_grid(self, other: "GridFunction1D") -> bool:
        return self.n == other.n and self.half_extent == other.half_extent


@dataclass(frozen=True)
class GridFunction2D:
    """Axis 0 is t, axis 1 is s; values row-major over (t, s)."""

    half_extent_t: float
    half_extent_s: float
    n_t: int
    n_s: int
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        if not (self.half_extent_t > 0 and self.half_extent_s > 0):
            raise ValueError("half extents must be positive")
        _check_count(self.n_t, "n_t")
        _check_count(self.n_s, "n_s")
        v = np.asarray(self.values, dtype=np.complex128)
        if v.shape != (self.n_t, self.n_s):
            raise ValueError(f"values shape {v.shape} != ({self.n_t}, {self.n_s})")
        if not (np.all(np.isfinite(v.real)) and np.all(np.isfinite(v.imag))):
            raise ValueError("values must be finite")
        v = v.copy()
        v.flags.writeable = False
        object.__setattr__(self, "values", v)

    @property
    def dt(self) -> float:
        return 2.0 * self.half_extent_t / self.n_t

    @property
    def ds(self) -> float:
        return 2.0 * self.half_extent_s / self.n_s

    def t_axis(self) -> np.ndarray:
        return -self.half_extent_t + self.dt * np.arange(self.n_t)

    def s_axis(self) -> np.ndarray:
        return -self.half_extent_s + self.ds * np.arange(self.n_s)

    def t_freqs(self) -> np.ndarray:
        return 2.0 * np.pi * np.fft.fftfreq(self.n_t, d=self.dt)

    def s_freqs(self) -> np.ndarray:
        return 2.0 * np.pi * np.fft.fftfreq(self.n_s, d=self.ds)

    def with_values(self, values: np.ndarray) -> "GridFunction2D":
        return GridFunction2D(self.half_extent_t, self.half_extent_s,
                              self.n_t, self.n_s, values)

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.values) ** 2) * self.dt * self.ds))

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.values)))

    def same_grid(self, other: "GridFunction2D") -> bool:
        return (self.n_t == other.n_t and self.n_s == other.n_s
                and self.half_extent_t == other.half_extent_t
                and self.half_extent_s == other.half_extent_s)


def require_same_grid(a: GridFunction2D, b: GridFunction2D) -> None:
    if not a.same_grid(b):
        raise GridMismatchError(
            f"grid mismatch: ({a.n_t}x{a.n_s}, L=({a.half_extent_t},{a.half_extent_s})) "
            f"vs ({b.n_t}x{b.n_s}, L=({b.half_extent_t},{b.half_extent_s}))")


def gaussian_1d(half_extent: float, n: int, center: float = 0.0,
                width: float = 1.0, momentum: float = 0.0) -> GridFunction1D:
    g = GridFunction1D(half_extent, n, np.zeros(n))
    x = g.axis()
    vals = np.exp(-((x - center) ** 2) / (2.0 * width ** 2) + 1j * momentum * x)
    return g.with_values(vals)


def gaussian_2d(half_extent_t: float, half_extent_s: float, n_t: int, n_s: int,
                center: tuple[float, float] = (0.0, 0.0),
                width: tuple[float, float] = (1.0, 1.0),
                momentum: tuple[float, float] = (0.0, 0.0),
                amplitude: complex = 1.0) -> GridFunction2D:
    g = GridFunction2D(half_extent_t, half_extent_s, n_t, n_s,
                       np.zeros((n_t, n_s)))
    t = g.t_axis()[:, None]
    s = g.s_axis()[None, :]
    vals = amplitude * np.exp(
        -((t - center[0]) ** 2) / (2.0 * width[0] ** 2)
        - ((s - center[1]) ** 2) / (2.0 * width[1] ** 2)
        + 1j * (momentum[0] * t + momentum[1] * s))
    return g.with_values(vals)


def check_decay_1d(f: GridFunction1D, threshold: float = 1e-10) -> float:
    """Relative boundary magnitude; warns when the box visibly clips f."""
    peak = f.max_abs()
    if peak == 0.0:
        return 0.0
    edge = max(abs(f.values[0]), abs(f.values[-1])) / peak
    if edge > threshold:
        warnings.warn(f"boundary decay {edge:.3e} exceeds {threshold:.1e}; "
                      "the box clips this function", RuntimeWarning, stacklevel=2)
    return float(edge)


def check_decay_2d(f: GridFunction2D, threshold: float = 1e-10) -> float:
    peak = f.max_abs()
    if peak == 0.0:
        return 0.0
    v = np.abs(f.values)
    edge = max(v[0, :].max(), v[-1, :].max(), v[:, 0].max(), v[:, -1].max()) / peak
    if edge > threshold:
        warnings.warn(f"boundary decay {edge:.3e} exceeds {threshold:.1e}; "
                      "the box clips this function", RuntimeWarning, stacklevel=2)
    return float(edge)


# -- continuous Fourier transform on the grid ---------------------------
# Convention: Ff(y) = integral e^{-i<x,y>} f(x) dx, inverse carries 1/(2pi)^n.
# With x_j = -L + j dx and y_m = (m - n/2) pi/L the Riemann sum becomes a
# plain FFT after modulation by (-1)^j; the pair below inverts exactly.

def _fourier_axis(values: np.ndarray, axis: int, half_extent: float) -> np.ndarray:
    n = values.shape[axis]
    dx = 2.0 * half_extent / n
    xi = (np.arange(n) - n // 2) * (np.pi / half_extent)
    sign = np.where(np.arange(n) % 2 == 0, 1.0, -1.0)
    shape = [1] * values.ndim
    shape[axis] = n
    modulated = values * sign.reshape(shape)
    spec = np.fft.fft(modulated, axis=axis)
    phase = dx * np.exp(1j * xi * half_extent)
    return spec * phase.reshape(shape)


def _inv_fourier_axis(values: np.ndarray, axis: int, half_extent: float) -> np.ndarray:
    n = values.shape[axis]
    dx = 2.0 * half_extent / n
    xi = (np.arange(n) - n // 2) * (np.pi / half_extent)
    sign = np.where(np.arange(n) % 2 == 0, 1.0, -1.0)
    shape = [1] * values.ndim
    shape[axis] = n
    demodulated = values * np.exp(-1j * xi * half_extent).reshape(shape)
    back = np.fft.ifft(demodulated, axis=axis)
    return back * sign.reshape(shape) / dx


def fourier_2d(f: GridFunction2D) -> GridFunction2D:
    """F f on the dual grid; half extents become pi*n/(2L) per axis."""
    vals = _fourier_axis(f.values, 0, f.half_extent_t)
    vals = _fourier_axis(vals, 1, f.half_extent_s)
    lt = math.pi * f.n_t / (2.0 * f.half_extent_t)
    ls = math.pi * f.n_s / (2.0 * f.half_extent_s)
    return GridFunction2D(lt, ls, f.n_t, f.n_s, vals)


def inverse_fourier_2d(g: GridFunction2D) -> GridFunction2D:
    """Exact inverse of fourier_2d, including the 1/(2pi)^2 normalization."""
    lt = math.pi * g.n_t / (2.0 * g.half_extent_t)
    ls = math.pi * g.n_s / (2.0 * g.half_extent_s)
    vals = _inv_fourier_axis(g.values, 1, ls)
    vals = _inv_fourier_axis(vals, 0, lt)
    return GridFunction2D(lt, ls, g.n_t, g.n_s, vals)


# -- serialization -------------------------------------------------------

def _values_to_list(v: np.ndarray) -> list:
    return [[float(c.real), float(c.imag)] for c in v.reshape(-1)]


def _values_from_list(raw, count: int, what: str) -> np.ndarray:
    if not isinstance(raw, list):
        raise GridFormatError(f'"{what}" must be a list')
    if len(raw) != count:
        raise GridFormatError(f'"{what}" has {len(raw)} entries, expected {count}')
    out = np.empty(count, dtype=np.complex128)
    for i, pair in enumerate(raw):
        if not (isinstance(pair, list) and len(pair) == 2
                and all(isinstance(x, (int, float)) for x in pair)):
            raise GridFormatError(f"{what}[{i}] must be a [re, im] pair")
        re, im = float(pair[0]), float(pair[1])
        if not (math.isfinite(re) and math.isfinite(im)):
            raise GridFormatError(f"{what}[{i}] is not finite")
        out[i] = complex(re, im)
    return out


def grid1d_to_obj(f: GridFunction1D) -> dict:
    return {"half_extent": f.half_extent, "n": f.n, "values": _values_to_list(f.values)}


def grid1d_from_obj(obj) -> GridFunction1D:
    if not isinstance(obj, dict):
        raise GridFormatError("grid document must be an object")
    for key in ("half_extent", "n", "values"):
        if key not in obj:
            raise GridFormatError(f'missing field "{key}"')
    if not isinstance(obj["n"], int):
        raise GridFormatError('"n" must be an integer')
    vals = _values_from_list(obj["values"], obj["n"], "values")
    try:
        return GridFunction1D(float(obj["half_extent"]), obj["n"], vals)
    except ValueError as e:
        raise GridFormatError(str(e)) from e


def grid2d_to_obj(f: GridFunction2D) -> dict:
    return {
        "n_t": f.n_t,
        "n_s": f.n_s,
        "half_extent_t": f.half_extent_t,
        "half_extent_s": f.half_extent_s,
        "values": _values_to_list(f.values),
    }


def grid2d_from_obj(obj) -> GridFunction2D:
    if not isinstance(obj, dict):
        raise GridFormatError("grid document must be an object")
    for key in ("n_t", "n_s", "half_extent_t", "half_extent_s", "values"):
        if key not in obj:
            raise GridFormatError(f'missing field "{key}"')
    if not (isinstance(obj["n_t"], int) and isinstance(obj["n_s"], int)):
        raise GridFormatError('"n_t" and "n_s" must be integers')
    count = obj["n_t"] * obj["n_s"]
    vals = _values_from_list(obj["values"], count, "values")
    try:
        return GridFunction2D(float(obj["half_extent_t"]), float(obj["half_extent_s"]),
                              obj["n_t"], obj["n_s"],
                              vals.reshape(obj["n_t"], obj["n_s"]))
    except ValueError as e:
        raise GridFormatError(str(e)) from e


def load_grid2d(data: bytes | str) -> GridFunction2D:
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        obj = json.loads(data)
    except json.JSONDecodeError as e:
        raise GridFormatError(
            f"invalid JSON at line {e.lineno} column {e.colno}: {e.msg}") from e
    return grid2d_from_obj(obj)
