"""Dense complex linear algebra with the block conventions used downstream.

Everything here operates on plain ``numpy`` arrays of ``complex128``; matrices
are tiny (at most a few hundred rows), so dense factorizations are always the
right tool.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NonHermitianInput, SizeMismatch

DEFAULT_HERMITICITY_TOL = 1e-10
DEFAULT_NULLSPACE_TOL = 1e-9


def as_complex_matrix(a) -> np.ndarray:
    """Coerce to a 2-d complex128 array (copying only when needed)."""
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2:
        raise SizeMismatch(f"expected a 2-d matrix, got shape {m.shape}")
    return m


def adjoint(a: np.ndarray) -> np.ndarray:
    return np.conj(a.T)


def hermiticity_defect(a: np.ndarray) -> float:
    """Max-entry norm of A - A^dagger."""
    a = as_complex_matrix(a)
    if a.size == 0:
        return 0.0
    return float(np.abs(a - adjoint(a)).max())


def require_hermitian(a: np.ndarray, tol: float = DEFAULT_HERMITICITY_TOL,
                      what: str = "matrix") -> np.ndarray:
    """Return ``a`` unchanged if Hermitian within ``tol`` relative to its largest entry."""
    a = as_complex_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise SizeMismatch(f"{what} must be square, got shape {a.shape}")
    scale = max(float(np.abs(a).max()) if a.size else 0.0, 1.0)
    defect = hermiticity_defect(a)
    if defect > tol * scale:
        raise NonHermitianInput(
            f"{what} is not Hermitian: max asymmetry {defect:.3e} "
            f"exceeds {tol:.1e} * {scale:.3e}")
    return a


def cayley(a: np.ndarray, scale: float = 0.5, *,
           hermiticity_tol: float = DEFAULT_HERMITICITY_TOL) -> np.ndarray:
    """Cayley transform (1 - i*scale*A)(1 + i*scale*A)^{-1} of Hermitian A.

    Unitary for every Hermitian A and real scale; raises NonHermitianInput
    otherwise.
    """
    a = require_hermitian(a, hermiticity_tol, "cayley input")
    eye = np.eye(a.shape[0], dtype=complex)
    num = eye - 1j * scale * a
    den = eye + 1j * scale * a
    # X = num @ den^{-1}, computed as a solve from the right.
    return np.linalg.solve(den.T, num.T).T


@dataclass(frozen=True)
class SubspaceBasis:
    """Orthonormal columns spanning a subspace, plus the tolerance that built it."""

    columns: np.ndarray
    tol: float

    @property
    def ambient_dim(self) -> int:
        return self.columns.shape[0]

    @property
    def dim(self) -> int:
        return self.columns.shape[1]

    @property
    def is_empty(self) -> bool:
        return self.dim == 0

    def orthonormality_defect(self) -> float:
        if self.is_empty:
            return 0.0
        gram = adjoint(self.columns) @ self.columns
        return float(np.abs(gram - np.eye(self.dim)).max())


def null_space(m: np.ndarray, tol: float = DEFAULT_NULLSPACE_TOL) -> SubspaceBasis:
    """Orthonormal basis of {v : ||Mv|| <= tol * ||M|| * ||v||} by SVD thresholding.

    An empty basis is a valid result; M = 0 returns the full space.
    """
    if tol <= 0:
        raise ValueError("null-space tolerance must be positive")
    m = as_complex_matrix(m)
    ncols = m.shape[1]
    _, sing, vh = np.linalg.svd(m, full_matrices=True)
    smax = float(sing[0]) if sing.size else 0.0
    if smax == 0.0:
        basis = np.eye(ncols, dtype=complex)
    else:
        rank = int(np.sum(sing > tol * smax))
        basis = adjoint(vh[rank:])
    return SubspaceBasis(columns=basis, tol=tol)


def principal_angles(u: SubspaceBasis, w: SubspaceBasis) -> np.ndarray:
    """Principal angles (radians, nondecreasing) between two subspaces.

    Small angles come from the sine-based projection residual (arccos of an
    overlap singular value loses half the digits near zero angle), large ones
    from the cosine overlap.
    """
    if u.ambient_dim != w.ambient_dim:
        raise DimensionMismatch(
            f"ambient dimensions differ: {u.ambient_dim} vs {w.ambient_dim}")
    if u.is_empty or w.is_empty:
        raise DimensionMismatch("principal angles need two nonempty subspaces")
    a, b = u.columns, w.columns
    if a.shape[1] < b.shape[1]:
        a, b = b, a
    overlap = adjoint(a) @ b
    cosines = np.clip(np.linalg.svd(overlap, compute_uv=False), 0.0, 1.0)
    residual = b - a @ overlap
    sines = np.clip(np.linalg.svd(residual, compute_uv=False), 0.0, 1.0)
    from_cos = np.sort(np.arccos(cosines))
    from_sin = np.sort(np.arcsin(sines))
    return np.where(from_cos > np.pi / 4, from_cos, from_sin)


@dataclass(frozen=True)
class BlockOperatorMatrix:
    """Square matrix on (C + K) tensor h with the 2x2 partition (X00, X0l; Xl0, Xll).

    ``m`` is the system dimension, ``n`` the channel count; the full matrix has
    size (1+n)m, the first m rows/columns forming the system block.
    """

    m: int
    n: int
    full: np.ndarray

    def __post_init__(self):
        full = as_complex_matrix(self.full)
        size = (1 + self.n) * self.m
        if self.m < 1 or self.n < 1:
            raise SizeMismatch(f"need m >= 1 and n >= 1, got m={self.m}, n={self.n}")
        if full.shape != (size, size):
            raise SizeMismatch(
                f"full matrix must be {size}x{size} for m={self.m}, n={self.n}, "
                f"got {full.shape}")
        object.__setattr__(self, "full", full)

    @property
    def size(self) -> int:
        return (1 + self.n) * self.m

    @property
    def x00(self) -> np.ndarray:
        return self.full[:self.m, :self.m]

    @property
    def x0l(self) -> np.ndarray:
        return self.full[:self.m, self.m:]

    @property
    def xl0(self) -> np.ndarray:
        return self.full[self.m:, :self.m]

    @property
    def xll(self) -> np.ndarray:
        return self.full[self.m:, self.m:]

    def block(self, alpha: int, beta: int) -> np.ndarray:
        """m x m sub-block for indices alpha, beta in 0..n (0 = system slot)."""
        if not (0 <= alpha <= self.n and 0 <= beta <= self.n):
            raise SizeMismatch(f"block indices out of range: ({alpha}, {beta})")
        m = self.m
        return self.full[alpha * m:(alpha + 1) * m, beta * m:(beta + 1) * m]

    def reassemble(self) -> np.ndarray:
        """Rebuild the full matrix from the four blocks (round-trip identity)."""
        top = np.hstack([self.x00, self.x0l])
        bottom = np.hstack([self.xl0, self.xll])
        return np.vstack([top, bottom])


def partition(full: np.ndarray, m: int, n: int) -> BlockOperatorMatrix:
    """View a (1+n)m square matrix through the system/channel block structure."""
    return BlockOperatorMatrix(m=m, n=n, full=as_complex_matrix(full))


def channel_projector(m: int, n: int) -> np.ndarray:
    """Projector onto the channel block: zero on the first m slots, identity after.

    Its coefficients are 1 exactly when both block indices are equal and >= 1.
    """
    size = (1 + n) * m
    pi = np.zeros((size, size), dtype=complex)
    pi[m:, m:] = np.eye(n * m)
    return pi
