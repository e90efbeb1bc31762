"""Finite-difference kernel: grids, Hermitian assembly, lowest eigenpairs.

Conventions fixed here and relied on by every other module:

* 1D grids are vertex-centered. Every node is a degree of freedom and the
  artificial endpoints carry implicit Dirichlet ghosts, so a zero potential
  on n nodes gives diagonal 2/h^2 and off-diagonal -1/h^2 throughout.
* 2D grids are vertex-centered along x1 and cell-centered along x2: the
  first x2 node sits half a spacing above the x2_lo wall. A Neumann tag on
  that wall is realized by mirror-ghost elimination, which is second-order
  accurate there, and exact for the magnetic hop (the link phase cancels
  against its conjugate).
* Magnetic hops carry Peierls phases, with the midpoint rule for the link
  integral of the vector potential. The midpoint rule is exact for linear
  integrands, so gauge shifts by gradients of quadratic functions commute
  with discretization exactly, not merely to O(h^2).
* Window edges snap outward onto fixed lattices (x1 on h*Z, x2 and 1D nodes
  on (k+1/2)h). Eigenvalues then vary smoothly as boxes move or grow; a
  floating grid rattles the discretization of a kink in the eigenfunction
  by O(h^2) with a large constant and can break box monotonicity.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import GaugeDiscontinuity, NonConvergence, NotHermitian, ParameterRange

_HERM_RTOL = 1e-14
_DENSE_CUTOFF = 400

TAG_DIRICHLET = "dirichlet"
TAG_NEUMANN = "neumann"


@dataclass(frozen=True)
class Resolution:
    """Numerical knobs shared by all solvers.

    spacing applies to the grid the called function itself builds; callers
    never forward it to helpers that discretize a different problem (a 2D
    band solver consulting the 1D fiber family passes spacing=None so the
    fiber keeps its own default).
    """

    spacing: Optional[float] = None
    tol: float = 1e-9
    max_iter: int = 5000
    seed: int = 0

    def spacing_or(self, default: float) -> float:
        return default if self.spacing is None else self.spacing


@dataclass(frozen=True)
class Grid1D:
    lo: float
    hi: float
    n: int

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ParameterRange(f"need lo < hi, got [{self.lo}, {self.hi}]")
        if self.n < 3:
            raise ParameterRange(f"need n >= 3 nodes, got {self.n}")

    @property
    def spacing(self) -> float:
        return (self.hi - self.lo) / (self.n - 1)

    def nodes(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.n)


@dataclass(frozen=True)
class Grid2D:
    """Tensor grid on [x1_lo, x1_hi] x [x2_lo, x2_hi].

    boundary_tags orders the edges (x1_lo, x1_hi, x2_lo, x2_hi). Only the
    x2_lo edge may be Neumann (the physical wall at x2 = 0); the other three
    are artificial and must stay Dirichlet. x1 nodes include both endpoints;
    x2 nodes are the n2 cell centers x2_lo + (k + 1/2) h2.
    """

    x1_lo: float
    x1_hi: float
    x2_lo: float
    x2_hi: float
    n1: int
    n2: int
    boundary_tags: tuple = (TAG_DIRICHLET, TAG_DIRICHLET, TAG_NEUMANN, TAG_DIRICHLET)

    def __post_init__(self):
        if not (self.x1_lo < self.x1_hi and self.x2_lo < self.x2_hi):
            raise ParameterRange("need x1_lo < x1_hi and x2_lo < x2_hi")
        if self.n1 < 3 or self.n2 < 3:
            raise ParameterRange(f"need n1, n2 >= 3, got ({self.n1}, {self.n2})")
        for i, tag in enumerate(self.boundary_tags):
            if tag not in (TAG_DIRICHLET, TAG_NEUMANN):
                raise ParameterRange(f"unknown boundary tag {tag!r}")
            if tag == TAG_NEUMANN and i != 2:
                raise ParameterRange("Neumann is only supported on the x2_lo edge")
        if self.boundary_tags[2] == TAG_NEUMANN and self.x2_lo != 0.0:
            raise ParameterRange("the Neumann wall must sit exactly at x2 = 0")

    @property
    def h1(self) -> float:
        return (self.x1_hi - self.x1_lo) / (self.n1 - 1)

    @property
    def h2(self) -> float:
        return (self.x2_hi - self.x2_lo) / self.n2

    @property
    def size(self) -> int:
        return self.n1 * self.n2

    @property
    def cell_measure(self) -> float:
        return self.h1 * self.h2

    def x1_nodes(self) -> np.ndarray:
        return np.linspace(self.x1_lo, self.x1_hi, self.n1)

    def x2_nodes(self) -> np.ndarray:
        return self.x2_lo + (np.arange(self.n2) + 0.5) * self.h2


def anchored_grid_1d(lo: float, hi: float, h: float) -> Grid1D:
    """Smallest half-integer lattice (k + 1/2) h covering [lo, hi]."""
    k_lo = int(np.floor(lo / h - 0.5))
    k_hi = int(np.ceil(hi / h - 0.5))
    k_hi = max(k_hi, k_lo + 2)
    return Grid1D(lo=(k_lo + 0.5) * h, hi=(k_hi + 0.5) * h, n=k_hi - k_lo + 1)


def anchored_grid_2d(x1_lo: float, x1_hi: float, x2_hi: float,
                     h1: float, h2: Optional[float] = None) -> Grid2D:
    """x1 snaps outward to h1*Z (a node lands exactly on x1 = 0 whenever the
    box spans it), x2 covers [0, x2_hi] with cell centers (k + 1/2) h2."""
    h2 = h1 if h2 is None else h2
    j_lo = int(np.floor(x1_lo / h1))
    j_hi = int(np.ceil(x1_hi / h1))
    j_hi = max(j_hi, j_lo + 2)
    n2 = max(3, int(np.ceil(x2_hi / h2 - 0.5)) + 1)
    return Grid2D(x1_lo=j_lo * h1, x1_hi=j_hi * h1, x2_lo=0.0, x2_hi=n2 * h2,
                  n1=j_hi - j_lo + 1, n2=n2)


class SparseHermitianOp:
    """CSR-backed Hermitian operator with its discrete L^2 cell measure.

    Hermiticity is enforced at construction: max |H - H*| must stay below
    1e-14 relative to the largest entry and the diagonal must be real.
    tridiagonal, when set by the 1D assembler, carries (diag, offdiag) so
    the eigensolver can take the banded fast path instead of ARPACK.
    """

    def __init__(self, matrix, cell_measure: float, tridiagonal=None):
        matrix = sp.csr_matrix(matrix)
        scale = max(1.0, float(np.abs(matrix.data).max())) if matrix.nnz else 1.0
        skew = np.abs((matrix - matrix.getH()).data)
        if skew.size and skew.max() > _HERM_RTOL * scale:
            raise NotHermitian(
                f"max |H - H*| = {skew.max():.3e} exceeds {_HERM_RTOL} at scale {scale:.3e}")
        d = matrix.diagonal()
        if np.iscomplexobj(d) and np.abs(d.imag).max() > _HERM_RTOL * scale:
            raise NotHermitian("diagonal has a nonzero imaginary part")
        self.matrix = matrix
        self.cell_measure = float(cell_measure)
        self.tridiagonal = tridiagonal

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    @property
    def dtype(self):
        return self.matrix.dtype

    def matvec(self, v: np.ndarray) -> np.ndarray:
        return self.matrix @ v


@dataclass(frozen=True, eq=False)
class EigenPair:
    """value with its eigenvector, normalized in the discrete L^2 measure.

    residual is ||H v - value v||_2 / ||v||_2 (scale invariant); iterations
    counts linear-system applications for iterative paths, 0 for direct ones.
    """

    value: float
    vector: np.ndarray
    residual: float
    iterations: int


@dataclass(frozen=True)
class Branched:
    """Piecewise field keeping its two branches addressable.

    Baking np.where into a closure would hide the branch structure; with it
    explicit, the assembler can bisect every straddling link to the interface
    and verify there, the only place continuity is required, that the two
    branches agree.
    """

    mask: Callable
    first: Callable
    second: Callable

    def __call__(self, x1, x2):
        return np.where(self.mask(x1, x2), self.first(x1, x2), self.second(x1, x2))


def _interface_jump(field: Branched, a1, a2, b1, b2, steps: int = 52) -> np.ndarray:
    """|first - second| at the mask crossing of each segment (a) -> (b)."""
    lo = np.zeros_like(a1)
    hi = np.ones_like(a1)
    ma = field.mask(a1, a2)
    for _ in range(steps):
        mid = 0.5 * (lo + hi)
        same = field.mask(a1 + mid * (b1 - a1), a2 + mid * (b2 - a2)) == ma
        lo = np.where(same, mid, lo)
        hi = np.where(same, hi, mid)
    mid = 0.5 * (lo + hi)
    p1 = a1 + mid * (b1 - a1)
    p2 = a2 + mid * (b2 - a2)
    return np.abs(field.first(p1, p2) - field.second(p1, p2))


def _check_interface_continuity(field: Branched, X1, X2, label: str):
    m = field.mask(X1, X2)
    worst = 0.0
    straddles = (
        ((X1[:-1, :], X2[:-1, :]), (X1[1:, :], X2[1:, :]), m[:-1, :] != m[1:, :]),
        ((X1[:, :-1], X2[:, :-1]), (X1[:, 1:], X2[:, 1:]), m[:, :-1] != m[:, 1:]),
    )
    for (a1, a2), (b1, b2), hit in straddles:
        if hit.any():
            jump = _interface_jump(field, a1[hit], a2[hit], b1[hit], b2[hit])
            worst = max(worst, float(jump.max()))
    if worst > 1e-8:
        raise GaugeDiscontinuity(
            f"{label} jumps by {worst:.3e} across the field interface")


def assemble_1d_schrodinger(grid: Grid1D, potential: Callable) -> SparseHermitianOp:
    """-d^2/dt^2 + V(t) on the grid nodes, Dirichlet ghosts at both ends."""
    t = grid.nodes()
    h = grid.spacing
    V = np.asarray(potential(t), dtype=float)
    d = 2.0 / h ** 2 + V
    e = np.full(grid.n - 1, -1.0 / h ** 2)
    H = sp.diags([e, d, e], [-1, 0, 1], format="csr")
    return SparseHermitianOp(H, cell_measure=h, tridiagonal=(d, e))


def assemble_2d_magnetic_schrodinger(grid: Grid2D, vector_potential=None,
                                     electric_potential=None) -> SparseHermitianOp:
    """(-i d1 - A1)^2 + (-i d2 - A2)^2 + V on the tensor grid.

    vector_potential is None or a pair (A1, A2) of callables (either entry
    may be None). A Branched component gets its continuity verified across
    every straddling link before assembly. With no vector potential at all
    the matrix is real. Dirichlet ghosts are implicit outside the three
    artificial edges; a Neumann tag on x2_lo removes one vertical hop from
    the first-row diagonal (mirror ghost).
    """
    x1 = grid.x1_nodes()
    x2 = grid.x2_nodes()
    h1, h2 = grid.h1, grid.h2
    n1, n2 = grid.n1, grid.n2
    X1, X2 = np.meshgrid(x1, x2, indexing="ij")
    idx = np.arange(grid.size).reshape(n1, n2)

    A1, A2 = (None, None) if vector_potential is None else vector_potential
    for comp, label in ((A1, "A1"), (A2, "A2")):
        if isinstance(comp, Branched):
            _check_interface_continuity(comp, X1, X2, label)
    dtype = complex if (A1 is not None or A2 is not None) else float

    diag = np.full((n1, n2), 2.0 / h1 ** 2 + 2.0 / h2 ** 2, dtype=dtype)
    if electric_potential is not None:
        diag += np.asarray(electric_potential(X1, X2), dtype=float)
    if grid.boundary_tags[2] == TAG_NEUMANN:
        diag[:, 0] -= 1.0 / h2 ** 2

    rows = [idx.ravel()]
    cols = [idx.ravel()]
    vals = [diag.ravel()]

    i_a, i_b = idx[:-1, :], idx[1:, :]
    if A1 is not None:
        hop = -np.exp(-1j * h1 * np.asarray(A1(X1[:-1, :] + 0.5 * h1, X2[:-1, :]))) / h1 ** 2
    else:
        hop = np.full((n1 - 1, n2), -1.0 / h1 ** 2, dtype=dtype)
    rows += [i_a.ravel(), i_b.ravel()]
    cols += [i_b.ravel(), i_a.ravel()]
    vals += [hop.ravel(), np.conj(hop).ravel()]

    i_a, i_b = idx[:, :-1], idx[:, 1:]
    if A2 is not None:
        hop = -np.exp(-1j * h2 * np.asarray(A2(X1[:, :-1], X2[:, :-1] + 0.5 * h2))) / h2 ** 2
    else:
        hop = np.full((n1, n2 - 1), -1.0 / h2 ** 2, dtype=dtype)
    rows += [i_a.ravel(), i_b.ravel()]
    cols += [i_b.ravel(), i_a.ravel()]
    vals += [hop.ravel(), np.conj(hop).ravel()]

    H = sp.csr_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
                      shape=(grid.size, grid.size))
    return SparseHermitianOp(H, cell_measure=grid.cell_measure)


def _fix_phase(vec: np.ndarray) -> np.ndarray:
    # make the largest component real positive so repeated runs agree exactly
    pivot = vec[int(np.argmax(np.abs(vec)))]
    if pivot != 0:
        vec = vec * (np.abs(pivot) / pivot)
    return vec


def _ground_sparse(H: sp.csr_matrix, tol: float, max_iter: int, seed: int):
    n = H.shape[0]
    rng = np.random.default_rng(seed)
    v0 = rng.standard_normal(n).astype(H.dtype)
    best = np.inf
    count = {"n": 0}
    try:
        lu = spla.splu(sp.csc_matrix(H))

        def _solve(x):
            count["n"] += 1
            return lu.solve(x)

        opinv = spla.LinearOperator((n, n), matvec=_solve, dtype=H.dtype)
        w, v = spla.eigsh(H, k=2, sigma=0.0, which="LM", OPinv=opinv, v0=v0,
                          ncv=min(n - 1, 40), maxiter=max_iter, tol=min(tol, 1e-10))
        i = int(np.argmin(w))
        vec = v[:, i]
        res = float(np.linalg.norm(H @ vec - w[i] * vec) / np.linalg.norm(vec))
        if res <= tol:
            return float(w[i]), vec, count["n"]
        best = res
    except (spla.ArpackNoConvergence, MemoryError, RuntimeError):
        pass

    # fallback: Jacobi-preconditioned LOBPCG; rarely taken
    dinv = 1.0 / H.diagonal().real
    precond = spla.LinearOperator((n, n), matvec=lambda x: dinv[:, None] * x
                                  if x.ndim == 2 else dinv * x, dtype=H.dtype)
    X = rng.standard_normal((n, 2)).astype(H.dtype)
    w, v, hist = spla.lobpcg(H, X, M=precond, tol=tol * 0.1, maxiter=max_iter,
                             largest=False, retResidualNormsHistory=True)
    i = int(np.argmin(w))
    vec = v[:, i]
    res = float(np.linalg.norm(H @ vec - w[i] * vec) / np.linalg.norm(vec))
    iters = count["n"] + len(hist)
    if res > tol:
        raise NonConvergence(iterations=iters, best_residual=min(best, res))
    return float(w[i]), vec, iters


def lowest_eigenpair(op: SparseHermitianOp, tol: float = 1e-9,
                     max_iter: int = 5000, seed: int = 0) -> EigenPair:
    """Ground eigenpair of a positive Hermitian finite-difference operator.

    Dispatch: banded solver when the 1D assembler flagged tridiagonal
    structure, dense below 400 unknowns, else shift-invert Lanczos at
    sigma = 0 (the operator is positive definite, so the level nearest zero
    is the ground level), with Jacobi-LOBPCG as fallback. Deterministic for
    a fixed seed. Raises NonConvergence when no path meets tol.
    """
    H = op.matrix
    if op.tridiagonal is not None:
        d, e = op.tridiagonal
        w, v = sla.eigh_tridiagonal(d, e, select="i", select_range=(0, 0))
        value, vec, iters = float(w[0]), v[:, 0], 0
    elif op.n <= _DENSE_CUTOFF:
        w, v = sla.eigh(H.toarray())
        value, vec, iters = float(w[0]), v[:, 0], 0
    else:
        value, vec, iters = _ground_sparse(H, tol, max_iter, seed)
    vnorm = float(np.linalg.norm(vec))
    residual = float(np.linalg.norm(H @ vec - value * vec) / vnorm)
    if residual > tol:
        raise NonConvergence(iterations=iters, best_residual=residual)
    vec = _fix_phase(vec / (vnorm * np.sqrt(op.cell_measure)))
    return EigenPair(value=value, vector=vec, residual=residual, iterations=iters)


def wall_mass(vector: np.ndarray, grid: Grid2D, depth: float = 3.0) -> float:
    """Fraction of probability mass within depth of the artificial walls."""
    v2 = np.abs(np.asarray(vector).reshape(grid.n1, grid.n2)) ** 2
    v2 = v2 / v2.sum()
    x1 = grid.x1_nodes()
    x2 = grid.x2_nodes()
    tags = grid.boundary_tags
    # union of the strips, so a cell near two walls is counted once and
    # the result stays a genuine fraction in [0, 1]
    near = np.zeros((grid.n1, grid.n2), dtype=bool)
    if tags[0] == TAG_DIRICHLET:
        near[x1 < grid.x1_lo + depth, :] = True
    if tags[1] == TAG_DIRICHLET:
        near[x1 > grid.x1_hi - depth, :] = True
    if tags[2] == TAG_DIRICHLET:
        near[:, x2 < grid.x2_lo + depth] = True
    if tags[3] == TAG_DIRICHLET:
        near[:, x2 > grid.x2_hi - depth] = True
    return float(v2[near].sum())


def richardson(fine: float, coarse: float, ratio: float, order: float = 2.0) -> float:
    """One extrapolation step for quantities with error ~ C h^order.

    ratio is h_coarse / h_fine (> 1).
    """
    return fine + (fine - coarse) / (ratio ** order - 1.0)
