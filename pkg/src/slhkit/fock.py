"""Truncated boundary-mode spaces: boundary subspaces and the singular action.

The space is C^m tensor 2n boson modes, each truncated at photon cutoff d.
Flattened basis ordering (fixed for reproducibility): the system index is the
slowest (most significant) digit; the mode occupations follow in the order
(1,+), ..., (n,+), (1,-), ..., (n,-) stored little-endian, i.e. mode (1,+) is
the fastest-varying digit.  With k_p the occupation of the mode at digit p,

    index = s * d^(2n) + sum_p k_p * d^p.

Boundary operators contain no creators, so kernels computed on the truncated
space coincide with the finitely-supported solutions of the untruncated
problem.  Operators containing creators (the singular generator and the
coupling term) are only truncation-exact on vectors with per-mode occupation
at most d-2; all action checks project onto that guard first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from .errors import NotInDomain, TooLarge
from .linalg import SubspaceBasis, adjoint, null_space, principal_angles
from .slh import CouplingMatrix, Gauge, SLHResult, gauge_zll, slh_triple

SIZE_GUARD = 100_000
DEFAULT_KERNEL_TOL = 1e-9


@dataclass(frozen=True)
class TruncatedFockSpace:
    """System space C^m with 2n boson modes truncated at photon cutoff d."""

    m: int
    n: int
    d: int

    def __post_init__(self):
        if self.d < 3 or self.m < 1 or self.n < 1:
            raise TooLarge(f"need d >= 3, m >= 1, n >= 1, got "
                           f"(m, n, d) = ({self.m}, {self.n}, {self.d})")
        if self.dim > SIZE_GUARD:
            raise TooLarge(f"m * d^(2n) = {self.dim} exceeds the "
                           f"desk-scale guard {SIZE_GUARD}")

    @property
    def n_modes(self) -> int:
        return 2 * self.n

    @property
    def fock_dim(self) -> int:
        return self.d ** self.n_modes

    @property
    def dim(self) -> int:
        return self.m * self.fock_dim

    def ladder(self) -> np.ndarray:
        """Single-mode annihilator: a|k> = sqrt(k)|k-1>, a|0> = 0."""
        a = np.zeros((self.d, self.d), dtype=complex)
        for k in range(1, self.d):
            a[k - 1, k] = np.sqrt(k)
        return a

    def digit(self, j: int, sign: str) -> int:
        """Digit position of mode (j, sign) for channel j in 1..n."""
        if not (1 <= j <= self.n) or sign not in ("+", "-"):
            raise ValueError(f"no mode ({j}, {sign!r})")
        return (j - 1) if sign == "+" else (self.n + j - 1)

    def embed_mode(self, op: np.ndarray, pos: int) -> np.ndarray:
        """Lift a d x d single-mode operator acting on digit ``pos`` to the
        full space (identity on the system factor and all other modes)."""
        before = np.eye(self.d ** (self.n_modes - 1 - pos))
        after = np.eye(self.d ** pos)
        fock_op = np.kron(np.kron(before, op), after)
        return np.kron(np.eye(self.m), fock_op)

    def lift_system(self, mat: np.ndarray) -> np.ndarray:
        """Lift an m x m system operator to the full space."""
        return np.kron(np.asarray(mat, dtype=complex), np.eye(self.fock_dim))

    def occupations(self) -> np.ndarray:
        """Array (dim, 2n) of per-mode occupation digits for every basis index."""
        fock_idx = np.arange(self.fock_dim)
        digits = np.empty((self.fock_dim, self.n_modes), dtype=int)
        for p in range(self.n_modes):
            digits[:, p] = (fock_idx // self.d ** p) % self.d
        return np.tile(digits, (self.m, 1))

    def photon_guard_mask(self, max_occ: Optional[int] = None) -> np.ndarray:
        """Boolean mask of basis states with every mode occupation <= max_occ
        (default d - 2, below which creators act truncation-exactly)."""
        cap = self.d - 2 if max_occ is None else max_occ
        return (self.occupations() <= cap).all(axis=1)


@dataclass(frozen=True)
class ModeOperators:
    """Full-space matrices for the boundary modes of one truncated space.

    ``a_star`` is the symmetric combination (a_+ + a_-)/2 per channel and
    ``frak_a`` its gauge deformation; ungauged they coincide.  The zeroth
    slot of the mode vector is the identity, kept explicitly as ``a0``.
    """

    space: TruncatedFockSpace
    gauge: Optional[Gauge]
    a_plus: List[np.ndarray]
    a_minus: List[np.ndarray]
    a_star: List[np.ndarray]
    frak_a: List[np.ndarray]
    a0: np.ndarray


def build_mode_operators(m: int, n: int, d: int,
                         gauge: Optional[Gauge] = None) -> ModeOperators:
    """Construct annihilators for all 2n modes plus their (gauged) combinations."""
    space = TruncatedFockSpace(m=m, n=n, d=d)
    a = space.ladder()
    a_plus = [space.embed_mode(a, space.digit(j, "+")) for j in range(1, n + 1)]
    a_minus = [space.embed_mode(a, space.digit(j, "-")) for j in range(1, n + 1)]
    a_star = [0.5 * (ap + am) for ap, am in zip(a_plus, a_minus)]

    zll = gauge_zll(gauge, m, n)
    if gauge is None or not np.any(zll):
        frak_a = [op.copy() for op in a_star]
    else:
        # frak_a_j = sum_k (kappa_-)_{jk} a_{k,+} + (kappa_+)_{jk} a_{k,-}
        # with kappa_pm = 1/2 +- iZ on the channel block; the kappa_- weight
        # sits on the + modes so that the scalar case reduces to
        # kappa_- a_+ + kappa_+ a_-.
        kp = 0.5 * np.eye(n * m, dtype=complex) + 1j * zll
        km = 0.5 * np.eye(n * m, dtype=complex) - 1j * zll
        frak_a = []
        for j in range(n):
            acc = np.zeros((space.dim, space.dim), dtype=complex)
            for k in range(n):
                km_blk = km[j * m:(j + 1) * m, k * m:(k + 1) * m]
                kp_blk = kp[j * m:(j + 1) * m, k * m:(k + 1) * m]
                acc += space.lift_system(km_blk) @ a_plus[k]
                acc += space.lift_system(kp_blk) @ a_minus[k]
            frak_a.append(acc)
    return ModeOperators(space=space, gauge=gauge, a_plus=a_plus,
                         a_minus=a_minus, a_star=a_star, frak_a=frak_a,
                         a0=np.eye(space.dim, dtype=complex))


def coherent_vector(space: TruncatedFockSpace, j: int, sign: str,
                    alpha: complex) -> np.ndarray:
    """Normalized truncated coherent state in mode (j, sign), vacuum elsewhere,
    system component e_0."""
    amps = np.array([alpha ** k / math.sqrt(math.factorial(k))
                     for k in range(space.d)], dtype=complex)
    amps /= np.linalg.norm(amps)
    pos = space.digit(j, sign)
    vec = np.zeros(space.dim, dtype=complex)
    idx = np.arange(space.d) * space.d ** pos
    vec[idx] = amps
    return vec


# --- boundary conditions -----------------------------------------------------


@dataclass(frozen=True)
class BoundarySubspace:
    """Kernel of one family of boundary operators, with its construction route."""

    basis: SubspaceBasis
    route: str
    tol: float

    @property
    def dim(self) -> int:
        return self.basis.dim


def _coupling_rows(e: CouplingMatrix, ops: ModeOperators) -> List[np.ndarray]:
    """Rows B_j = i(a_{j,+} - a_{j,-}) + E_{j0} + sum_k E_{jk} frak_a_k."""
    space = ops.space
    rows = []
    for j in range(1, e.n + 1):
        row = 1j * (ops.a_plus[j - 1] - ops.a_minus[j - 1])
        row = row + space.lift_system(e.block.block(j, 0))
        for k in range(1, e.n + 1):
            row = row + space.lift_system(e.block.block(j, k)) @ ops.frak_a[k - 1]
        rows.append(row)
    return rows


def _slh_rows(e: CouplingMatrix, ops: ModeOperators,
              triple: Optional[SLHResult] = None) -> List[np.ndarray]:
    """Rows C_j = a_{j,-} - sum_k S_{jk} a_{k,+} - L_j."""
    space = ops.space
    res = slh_triple(e, ops.gauge) if triple is None else triple
    m = e.m
    rows = []
    for j in range(e.n):
        row = ops.a_minus[j].copy()
        for k in range(e.n):
            s_blk = res.s[j * m:(j + 1) * m, k * m:(k + 1) * m]
            row = row - space.lift_system(s_blk) @ ops.a_plus[k]
        row = row - space.lift_system(res.l[j * m:(j + 1) * m, :])
        rows.append(row)
    return rows


def stacked_boundary_rows(e: CouplingMatrix, ops: ModeOperators,
                          route: str = "B") -> np.ndarray:
    """Stacked boundary operators for either construction route."""
    if route == "B":
        return np.vstack(_coupling_rows(e, ops))
    if route == "C":
        return np.vstack(_slh_rows(e, ops))
    raise ValueError(f"unknown route {route!r}")


def boundary_subspace_b(e: CouplingMatrix, ops: ModeOperators,
                        tol: float = DEFAULT_KERNEL_TOL) -> BoundarySubspace:
    """Kernel of the stacked coupling-form boundary operators (no creators,
    hence truncation-exact)."""
    stacked = np.vstack(_coupling_rows(e, ops))
    return BoundarySubspace(basis=null_space(stacked, tol), route="B", tol=tol)


def boundary_subspace_c(e: CouplingMatrix, ops: ModeOperators,
                        tol: float = DEFAULT_KERNEL_TOL) -> BoundarySubspace:
    """Kernel of the scattering-form boundary operators a_- = S a_+ + L."""
    stacked = np.vstack(_slh_rows(e, ops))
    return BoundarySubspace(basis=null_space(stacked, tol), route="C", tol=tol)


def boundary_residual(e: CouplingMatrix, ops: ModeOperators,
                      vectors: np.ndarray) -> float:
    """Max relative residual of the coupling-form boundary condition over columns."""
    stacked = np.vstack(_coupling_rows(e, ops))
    scale = float(np.linalg.norm(stacked, 2))
    vecs = vectors if vectors.ndim == 2 else vectors[:, None]
    res = stacked @ vecs
    norms = np.linalg.norm(vecs, axis=0)
    return float(np.max(np.linalg.norm(res, axis=0) / (scale * norms)))


def guarded_domain_basis(e: CouplingMatrix, ops: ModeOperators,
                         tol: float = DEFAULT_KERNEL_TOL) -> SubspaceBasis:
    """Orthonormal basis of the boundary subspace intersected with the photon
    guard (per-mode occupation <= d-2), on which creators are exact."""
    space = ops.space
    outside = ~space.photon_guard_mask()
    selector = np.eye(space.dim, dtype=complex)[outside]
    stacked = np.vstack(_coupling_rows(e, ops) + [selector])
    return null_space(stacked, tol)


# --- singular generator and its action --------------------------------------


def singular_generator(e: CouplingMatrix, ops: ModeOperators) -> np.ndarray:
    """K_sing + Upsilon: i sum_j frak_a_j^dag (a_{j,+} - a_{j,-}) plus the
    normally-ordered coupling term sum_ab E_ab frak_a_a^dag frak_a_b (zeroth
    mode = identity)."""
    space = ops.space
    modes = [ops.a0] + [op for op in ops.frak_a]
    total = np.zeros((space.dim, space.dim), dtype=complex)
    for j in range(1, e.n + 1):
        total += 1j * adjoint(ops.frak_a[j - 1]) @ (ops.a_plus[j - 1]
                                                    - ops.a_minus[j - 1])
    for alpha in range(e.n + 1):
        for beta in range(e.n + 1):
            blk = e.block.block(alpha, beta)
            if not np.any(blk):
                continue
            total += adjoint(modes[alpha]) @ space.lift_system(blk) @ modes[beta]
    return total


def singular_action_operator(e: CouplingMatrix, ops: ModeOperators) -> np.ndarray:
    """The boundary-reduced action iG_00 + sum_k iG_0k a_{k,+}."""
    space = ops.space
    g = slh_triple(e, ops.gauge).ito
    total = space.lift_system(1j * g.block(0, 0))
    for k in range(1, e.n + 1):
        total += space.lift_system(1j * g.block(0, k)) @ ops.a_plus[k - 1]
    return total


def number_defect_residual(ops: ModeOperators) -> float:
    """Exact adjoint defect of the leading singular term: the ungauged
    i sum a_star^dag (a_+ - a_-) minus its adjoint equals i sum (N_+ - N_-),
    entrywise on the truncated space."""
    space = ops.space
    k = np.zeros((space.dim, space.dim), dtype=complex)
    nhat = np.zeros((space.dim, space.dim), dtype=complex)
    for j in range(space.n):
        k += 1j * adjoint(ops.a_star[j]) @ (ops.a_plus[j] - ops.a_minus[j])
        nhat += (adjoint(ops.a_plus[j]) @ ops.a_plus[j]
                 - adjoint(ops.a_minus[j]) @ ops.a_minus[j])
    return float(np.abs((k - adjoint(k)) - 1j * nhat).max())


def commutator_defect(ops: ModeOperators) -> float:
    """Truncation-aware CCR check: on the photon guard, [a_{j,s}, a_{k,s'}^dag]
    equals delta_jk delta_ss'; returns the worst guarded residual."""
    space = ops.space
    guard = space.photon_guard_mask()
    eye = np.eye(space.dim)
    worst = 0.0
    all_modes = list(ops.a_plus) + list(ops.a_minus)
    for i, a in enumerate(all_modes):
        for k, b in enumerate(all_modes):
            comm = a @ adjoint(b) - adjoint(b) @ a
            expect = eye if i == k else 0.0
            defect = np.abs(comm - expect)[np.ix_(guard, guard)]
            worst = max(worst, float(defect.max()))
    return worst


def number_spectrum_defect(ops: ModeOperators) -> float:
    """Per-mode number operators are diagonal with spectrum {0, ..., d-1};
    returns the worst deviation of the sorted unique diagonal."""
    space = ops.space
    expected = np.arange(space.d, dtype=float)
    worst = 0.0
    for a in list(ops.a_plus) + list(ops.a_minus):
        num = adjoint(a) @ a
        off = float(np.abs(num - np.diag(np.diag(num))).max())
        values = np.unique(np.round(np.diag(num).real, 12))
        if values.shape != expected.shape:
            return float("inf")
        worst = max(worst, off, float(np.abs(values - expected).max()))
    return worst


def singular_action_check(e: CouplingMatrix, ops: ModeOperators,
                          phi: np.ndarray, tol: float = 1e-8) -> float:
    """Relative residual of the singular action identity on one domain vector.

    The vector is first projected onto the photon guard (per-mode occupation
    <= d-2); it must still satisfy the boundary condition at ``tol`` or
    NotInDomain is raised.
    """
    return action_residuals(e, ops, [phi], tol)[0]


def action_residuals(e: CouplingMatrix, ops: ModeOperators, vectors,
                     tol: float = 1e-8) -> List[float]:
    """Singular-action residuals for a batch of domain vectors (operators are
    assembled once)."""
    space = ops.space
    guard = space.photon_guard_mask()
    lhs_op = singular_generator(e, ops)
    rhs_op = singular_action_operator(e, ops)
    stacked = np.vstack(_coupling_rows(e, ops))
    scale = float(np.linalg.norm(stacked, 2))
    out = []
    for phi in vectors:
        phi = np.asarray(phi, dtype=complex).copy()
        phi[~guard] = 0.0
        norm = np.linalg.norm(phi)
        if norm == 0.0:
            raise NotInDomain("vector vanishes after the photon guard projection")
        phi /= norm
        res = float(np.linalg.norm(stacked @ phi)) / scale
        if res > tol:
            raise NotInDomain(
                f"boundary-condition residual {res:.3e} exceeds tolerance "
                f"{tol:.1e}")
        out.append(float(np.linalg.norm(lhs_op @ phi - rhs_op @ phi)))
    return out


def sample_domain_vectors(e: CouplingMatrix, ops: ModeOperators, count: int,
                          rng: np.random.Generator,
                          tol: float = DEFAULT_KERNEL_TOL) -> List[np.ndarray]:
    """Random unit vectors in the guarded boundary subspace (empty list when
    the subspace is trivial)."""
    basis = guarded_domain_basis(e, ops, tol)
    if basis.is_empty:
        return []
    vecs = []
    for _ in range(count):
        coeff = rng.standard_normal(basis.dim) + 1j * rng.standard_normal(basis.dim)
        v = basis.columns @ coeff
        vecs.append(v / np.linalg.norm(v))
    return vecs


def subspace_equivalence(e: CouplingMatrix, ops: ModeOperators,
                         tol: float = DEFAULT_KERNEL_TOL) -> dict:
    """Compare the two boundary-subspace constructions.

    Returns kernel dimensions, and the largest principal angle when both are
    nonempty (None when both are empty, which is the expected outcome for a
    generic invertible system-channel coupling block).
    """
    sub_b = boundary_subspace_b(e, ops, tol)
    sub_c = boundary_subspace_c(e, ops, tol)
    report = {"dim_b": sub_b.dim, "dim_c": sub_c.dim, "max_angle": None}
    if sub_b.dim and sub_c.dim:
        angles = principal_angles(sub_b.basis, sub_c.basis)
        report["max_angle"] = float(angles.max()) if angles.size else 0.0
    return report


def gauged_fock_check(e: CouplingMatrix, gauge: Optional[Gauge],
                      d: int, n_vectors: int = 10,
                      rng: Optional[np.random.Generator] = None,
                      kernel_tol: float = DEFAULT_KERNEL_TOL,
                      action_tol: float = 1e-8) -> dict:
    """Boundary-subspace equivalence and singular-action residuals for one
    coupling, with the requested gauge deformation."""
    rng = np.random.default_rng(0) if rng is None else rng
    ops = build_mode_operators(e.m, e.n, d, gauge)
    report = subspace_equivalence(e, ops, kernel_tol)
    vectors = sample_domain_vectors(e, ops, n_vectors, rng, kernel_tol)
    residuals = action_residuals(e, ops, vectors, action_tol) if vectors else []
    report["action_residuals"] = residuals
    report["max_action_residual"] = max(residuals) if residuals else None
    report["number_defect_residual"] = number_defect_residual(ops)
    return report
