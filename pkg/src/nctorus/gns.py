"""Positive linear forms and the GNS construction on finite quotients.

Two carrier algebras: the N^2-dimensional quotient with U^N = V^N = 1
(associative on the nose, isomorphic to Mat_N for rational q), and a
truncated coefficient box whose products are re-truncated, which is not
associative; the discarded tail is measured and every GNS tolerance is
loosened by ten times that tail so the report stays honest.

A form phi produces the Gram matrix G_ij = phi(e_i* e_j); its kernel is
the null ideal, the quotient gets a modified Gram-Schmidt basis in
declared order (determinism), and generators become compressed
left-multiplication matrices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .lattice import CoeffLattice2, PhaseQ, retruncate
from .torus import TorusElement, adjoint, q_mul

__all__ = [
    "FiniteAlgebra",
    "torus_quotient",
    "truncated_box",
    "PositiveForm",
    "PositivityReport",
    "GnsTriplet",
    "gram_matrix",
    "is_positive",
    "gns_build",
    "state_action",
    "schwarz_check",
    "intertwiner",
    "separation_rank",
]


@dataclass(frozen=True)
class FiniteAlgebra:
    kind: str
    q: PhaseQ
    labels: tuple
    lmats: np.ndarray = field(repr=False)   # lmats[m,:,j] = coords of e_m e_j
    starmat: np.ndarray = field(repr=False)  # row i = coords of e_i*
    unit_index: int
    tail: float

    @property
    def dim(self) -> int:
        return len(self.labels)

    def index_of(self, label) -> int:
        return self.labels.index(label)

    def basis_vector(self, i: int) -> np.ndarray:
        v = np.zeros(self.dim, dtype=np.complex128)
        v[i] = 1.0
        return v

    def unit_vector(self) -> np.ndarray:
        return self.basis_vector(self.unit_index)

    def mul(self, f: np.ndarray, g: np.ndarray) -> np.ndarray:
        return np.einsum("m,mrj,j->r", f, self.lmats, g, optimize=False)

    def star(self, f: np.ndarray) -> np.ndarray:
        return self.starmat.T @ np.conj(f)


def torus_quotient(q: PhaseQ) -> FiniteAlgebra:
    """Basis U^s V^t, 0 <= s,t < N, with U^N = V^N = 1; exact structure phases."""
    if q.kind != "rational":
        raise ValueError("the finite quotient needs rational q")
    n = q.modulus
    labels = tuple((s, t) for s in range(n) for t in range(n))
    dim = n * n
    idx = {lab: i for i, lab in enumerate(labels)}
    lmats = np.zeros((dim, dim, dim), dtype=np.complex128)
    for i, (s, t) in enumerate(labels):
        for j, (s2, t2) in enumerate(labels):
            k = idx[((s + s2) % n, (t + t2) % n)]
            lmats[i, k, j] = q.pow(-t * s2)
    starmat = np.zeros((dim, dim), dtype=np.complex128)
    for i, (s, t) in enumerate(labels):
        starmat[i, idx[((-s) % n, (-t) % n)]] = q.pow(-s * t)
    return FiniteAlgebra("torus_quotient", q, labels, lmats, starmat,
                         idx[(0, 0)], 0.0)


def truncated_box(radius_k: int, radius_l: int, q: PhaseQ) -> FiniteAlgebra:
    """Monomial box with products cut back to the box; tail records the cut."""
    labels = tuple((k, l)
                   for k in range(-radius_k, radius_k + 1)
                   for l in range(-radius_l, radius_l + 1))
    dim = len(labels)
    idx = {lab: i for i, lab in enumerate(labels)}
    lmats = np.zeros((dim, dim, dim), dtype=np.complex128)
    tail = 0.0
    for i, (k1, l1) in enumerate(labels):
        for j, (k2, l2) in enumerate(labels):
            prod = q_mul(TorusElement(CoeffLattice2.delta(k1, l1), q),
                         TorusElement(CoeffLattice2.delta(k2, l2), q))
            cut, lost = retruncate(prod.coeffs, radius_k, radius_l)
            tail = max(tail, lost)
            for k, l, c in cut.support():
                lmats[i, idx[(k, l)], j] = c
    starmat = np.zeros((dim, dim), dtype=np.complex128)
    for i, (k, l) in enumerate(labels):
        st = adjoint(TorusElement(CoeffLattice2.delta(k, l), q))
        # the mirrored box equals the box, so the adjoint never truncates
        for k2, l2, c in st.coeffs.support():
            starmat[i, idx[(k2, l2)]] = c
    return FiniteAlgebra("truncated_box", q, labels, lmats, starmat,
                         idx[(0, 0)], tail)


@dataclass(frozen=True)
class PositiveForm:
    """phi given by its values on the declared basis order."""

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.complex128).reshape(-1)
        v = v.copy()
        v.flags.writeable = False
        object.__setattr__(self, "values", v)

    def __call__(self, f: np.ndarray) -> complex:
        return complex(np.dot(self.values, f))


def gram_matrix(phi: PositiveForm, a: FiniteAlgebra) -> np.ndarray:
    if len(phi.values) != a.dim:
        raise ValueError(f"form has {len(phi.values)} values, algebra dim {a.dim}")
    g = np.empty((a.dim, a.dim), dtype=np.complex128)
    for i in range(a.dim):
        star_i = a.star(a.basis_vector(i))
        for j in range(a.dim):
            g[i, j] = phi(a.mul(star_i, a.basis_vector(j)))
    return g


@dataclass(frozen=True)
class PositivityReport:
    ok: bool
    min_eigenvalue: float
    witness: np.ndarray | None
    hermiticity_residual: float
    star_residual: float


def is_positive(phi: PositiveForm, a: FiniteAlgebra,
                tol: float = 1e-10) -> PositivityReport:
    """Eigenvalue test on the Gram matrix; a failure returns the witness
    vector f with phi(f* f) < 0."""
    g = gram_matrix(phi, a)
    herm = float(np.max(np.abs(g - g.conj().T)))
    star_res = 0.0
    for i in range(a.dim):
        star_res = max(star_res, abs(phi(a.star(a.basis_vector(i)))
                                     - np.conj(phi(a.basis_vector(i)))))
    w, vecs = np.linalg.eigh((g + g.conj().T) / 2.0)
    lo = float(w[0])
    ok = lo >= -tol
    witness = None if ok else vecs[:, 0].copy()
    return PositivityReport(ok, lo, witness, herm, float(star_res))


@dataclass(frozen=True)
class GnsTriplet:
    quotient_dim: int
    basis: np.ndarray = field(repr=False)  # columns: orthonormal coords in A
    pi_mats: tuple = field(repr=False)
    omega: np.ndarray = field(repr=False)
    recon_residual: float
    hom_residual: float
    star_residual: float

    def pi(self, f: np.ndarray) -> np.ndarray:
        out = np.zeros((self.quotient_dim, self.quotient_dim), dtype=np.complex128)
        for m, c in enumerate(np.asarray(f, dtype=np.complex128)):
            if c != 0:
                out += c * self.pi_mats[m]
        return out


def gns_build(phi: PositiveForm, a: FiniteAlgebra, tol: float | None = None,
              rank_cut: float = 1e-9, order=None) -> GnsTriplet:
    """Quotient by the Gram kernel, orthonormalize, compress left multiplication.

    order permutes the basis fed to Gram-Schmidt (the default is the
    declared order); any two orders give unitarily equivalent triplets.
    """
    rep = is_positive(phi, a)
    if not rep.ok:
        raise ValueError(f"form is not positive: min eigenvalue {rep.min_eigenvalue:.3e}")
    if tol is None:
        tol = max(1e-10, 10.0 * a.tail)
    g = gram_matrix(phi, a)
    g = (g + g.conj().T) / 2.0
    gmax = max(float(np.max(np.abs(np.diag(g)))), 1e-300)

    cols: list[np.ndarray] = []
    seq = list(range(a.dim)) if order is None else list(order)
    if sorted(seq) != list(range(a.dim)):
        raise ValueError("order must be a permutation of the basis indices")
    for i in seq:
        v = a.basis_vector(i)
        for _ in range(2):  # one re-orthogonalization pass for stability
            for u in cols:
                v = v - u * np.dot(np.conj(u), g @ v)
        n2 = float(np.real(np.dot(np.conj(v), g @ v)))
        if n2 <= rank_cut * gmax:
            continue
        cols.append(v / math.sqrt(n2))
    if not cols:
        e = np.zeros((a.dim, 0), dtype=np.complex128)
        return GnsTriplet(0, e, (), np.zeros(0, dtype=np.complex128), 0.0, 0.0, 0.0)
    e = np.stack(cols, axis=1)

    eg = e.conj().T @ g  # (r, dim), the quotient-side pairing
    pi_mats = tuple(eg @ a.lmats[m] @ e for m in range(a.dim))
    omega = eg @ a.unit_vector()

    recon = 0.0
    hom = 0.0
    star = 0.0
    for m in range(a.dim):
        recon = max(recon, abs(phi(a.basis_vector(m))
                               - complex(np.conj(omega) @ (pi_mats[m] @ omega))))
        star_m = a.star(a.basis_vector(m))
        pi_star = sum(c * pi_mats[r] for r, c in enumerate(star_m) if c != 0)
        star = max(star, float(np.max(np.abs(pi_star - pi_mats[m].conj().T))))
        for j in range(a.dim):
            prod = a.lmats[m][:, j]
            pi_prod = sum(c * pi_mats[r] for r, c in enumerate(prod) if c != 0)
            if isinstance(pi_prod, int):  # empty product vector
                pi_prod = np.zeros_like(pi_mats[0])
            hom = max(hom, float(np.max(np.abs(pi_prod - pi_mats[m] @ pi_mats[j]))))
    if max(recon, hom, star) > tol:
        raise ValueError(
            f"GNS invariants violated: reconstruction {recon:.3e}, "
            f"homomorphism {hom:.3e}, star {star:.3e} exceed {tol:.1e}")
    return GnsTriplet(e.shape[1], e, pi_mats, omega, recon, hom, star)


def state_action(phi: PositiveForm, f: np.ndarray, a: FiniteAlgebra) -> PositiveForm:
    """phi_f(g) = phi(f* g f), evaluated as ((f* g) f) in the algebra."""
    fs = a.star(np.asarray(f, dtype=np.complex128))
    vals = np.empty(a.dim, dtype=np.complex128)
    for j in range(a.dim):
        vals[j] = phi(a.mul(a.mul(fs, a.basis_vector(j)), f))
    return PositiveForm(vals)


def schwarz_check(phi: PositiveForm, f: np.ndarray, a: FiniteAlgebra) -> float:
    """max(0, |phi(f)| - phi(1)^{1/2} phi(f* f)^{1/2})."""
    f = np.asarray(f, dtype=np.complex128)
    lhs = abs(phi(f))
    p1 = max(float(np.real(phi(a.unit_vector()))), 0.0)
    pff = max(float(np.real(phi(a.mul(a.star(f), f)))), 0.0)
    return max(0.0, lhs - math.sqrt(p1) * math.sqrt(pff))


def intertwiner(t1: GnsTriplet, t2: GnsTriplet,
                a: FiniteAlgebra) -> tuple[np.ndarray, float]:
    """Unitary W with W pi1(f) = pi2(f) W and W Omega1 = Omega2.

    Both triplets are cyclic for the same form, so matching the orbit of
    the cyclic vector determines W; the orthogonal-Procrustes polish of
    the orbit correspondence is the least-squares unitary.
    """
    if t1.quotient_dim != t2.quotient_dim:
        raise ValueError("quotient dimensions differ; no unitary can intertwine")
    m1 = np.stack([t1.pi_mats[m] @ t1.omega for m in range(a.dim)], axis=1)
    m2 = np.stack([t2.pi_mats[m] @ t2.omega for m in range(a.dim)], axis=1)
    u, _, vh = np.linalg.svd(m2 @ m1.conj().T)
    w = u @ vh
    res = float(np.max(np.abs(w @ m1 - m2)))
    for m in range(a.dim):
        res = max(res, float(np.max(np.abs(w @ t1.pi_mats[m] - t2.pi_mats[m] @ w))))
    res = max(res, float(np.max(np.abs(w @ t1.omega - t2.omega))))
    return w, res


def separation_rank(forms: list[PositiveForm], a: FiniteAlgebra) -> tuple[int, int]:
    """Rank of the stacked Grams and of f -> direct-sum pi(f); both equal
    the algebra dimension exactly when the family separates points."""
    grams = [gram_matrix(phi, a) for phi in forms]
    stacked = np.vstack(grams) if grams else np.zeros((0, a.dim))
    rank_gram = int(np.linalg.matrix_rank(stacked, tol=1e-9))
    blocks = []
    for phi in forms:
        t = gns_build(phi, a)
        if t.quotient_dim == 0:
            continue
        blocks.append(np.stack([t.pi_mats[m].reshape(-1) for m in range(a.dim)], axis=1))
    pi_map = np.vstack(blocks) if blocks else np.zeros((0, a.dim))
    rank_pi = int(np.linalg.matrix_rank(pi_map, tol=1e-9))
    return rank_gram, rank_pi
