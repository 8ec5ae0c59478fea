"""Coherence measures and noiseless-recovery certification.

Implements the dictionary quality measures used to certify that the
hierarchical model recovers a planted block- and in-block-sparse code
exactly from noiseless data: standard, block, cross and sub coherence, the
sparse singular value / sparse matrix norm obtained by brute-force support
enumeration, coherence measures between the dictionary and its projection
away from inactive in-block atoms, and the evaluation of both the
instance-level (support-dependent) and uniform (dictionary-only) sufficient
conditions.

The sparse measures are NP-hard in general; everything here enumerates
supports exactly and refuses to start when the subset count exceeds a cap.
An explicitly labeled subsampling mode produces lower bounds instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations, product

import numpy as np

from .model import Dictionary, GroupPartition

__all__ = [
    "DEFAULT_ENUM_CAP",
    "AssumptionViolatedError",
    "EnumerationCapError",
    "SupportSpec",
    "CoherenceReport",
    "ProjectedCoherences",
    "RecoveryCertificate",
    "standard_coherence",
    "block_coherence",
    "cross_coherence",
    "sub_coherence",
    "coherence_report",
    "sparse_singular_value_ss",
    "sparse_matrix_norm_s",
    "sparse_block_coherences",
    "projected_coherences",
    "block_spectral_norm",
    "norm_1_1",
    "gamma_bound",
    "instance_conditions",
    "theorem2_check",
]

#: Maximum number of subset evaluations per measure before giving up.
DEFAULT_ENUM_CAP = 10**6

_RANK_TOL = 1e-10


class AssumptionViolatedError(ValueError):
    """A certification precondition (linear independence, invertibility) failed."""


class EnumerationCapError(RuntimeError):
    """Exact enumeration would exceed the subset-evaluation cap."""


@dataclass(frozen=True)
class SupportSpec:
    """A block-sparse support: which groups are active, and where inside each.

    ``within_group_supports[i]`` lists 0-based positions relative to the
    i-th active group; all active groups must carry the same in-group
    sparsity ``s``.
    """

    active_groups: tuple[int, ...]
    within_group_supports: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        groups = tuple(int(r) for r in self.active_groups)
        if len(groups) < 1 or len(set(groups)) != len(groups):
            raise ValueError("active_groups must be a non-empty set of distinct indices")
        supports = tuple(
            tuple(sorted(int(i) for i in sup)) for sup in self.within_group_supports
        )
        if len(supports) != len(groups):
            raise ValueError("need one within-group support per active group")
        sizes = {len(sup) for sup in supports}
        if len(sizes) != 1 or min(sizes) < 1:
            raise ValueError("within-group supports must share one size s >= 1")
        for sup in supports:
            if len(set(sup)) != len(sup) or min(sup) < 0:
                raise ValueError("within-group supports must be distinct non-negative indices")
        object.__setattr__(self, "active_groups", groups)
        object.__setattr__(self, "within_group_supports", supports)

    @property
    def k(self) -> int:
        return len(self.active_groups)

    @property
    def s(self) -> int:
        return len(self.within_group_supports[0])

    def validate_with(self, partition: GroupPartition) -> None:
        for r, sup in zip(self.active_groups, self.within_group_supports):
            if not 0 <= r < partition.q:
                raise ValueError(f"active group {r} out of range")
            if max(sup) >= len(partition.groups[r]):
                raise ValueError(f"within-group support exceeds the size of group {r}")

    def s0_indices(self, partition: GroupPartition) -> np.ndarray:
        """Absolute indices of all active atoms, ordered active group by group."""
        self.validate_with(partition)
        return np.concatenate(
            [partition.groups[r][list(sup)]
             for r, sup in zip(self.active_groups, self.within_group_supports)]
        )

    def t0_indices(self, partition: GroupPartition) -> np.ndarray:
        """Absolute indices of the inactive atoms inside active groups."""
        self.validate_with(partition)
        parts = []
        for r, sup in zip(self.active_groups, self.within_group_supports):
            g_idx = partition.groups[r]
            keep = np.setdiff1d(np.arange(len(g_idx)), np.asarray(sup, dtype=np.intp))
            parts.append(g_idx[keep])
        return (
            np.concatenate(parts) if parts and sum(len(x) for x in parts)
            else np.empty(0, dtype=np.intp)
        )

    def inactive_groups(self, partition: GroupPartition) -> tuple[int, ...]:
        active = set(self.active_groups)
        return tuple(r for r in range(partition.q) if r not in active)

    def gbar0_indices(self, partition: GroupPartition) -> np.ndarray:
        """Absolute indices of all atoms of inactive groups, group by group."""
        inactive = self.inactive_groups(partition)
        if not inactive:
            return np.empty(0, dtype=np.intp)
        return np.concatenate([partition.groups[r] for r in inactive])


@dataclass(frozen=True)
class CoherenceReport:
    """All dictionary coherence measures at in-group sparsity ``s``."""

    mu: float
    mu_block: float
    chi: float
    nu: float
    mu_block_ss: float
    mu_block_s: float
    s: int


@dataclass(frozen=True)
class ProjectedCoherences:
    """Worst-case coherences between the dictionary and its projected image.

    For every admissible support placement, the dictionary is projected
    away from the span of the inactive atoms inside active groups; the
    fields are maxima over all placements at group sparsity ``k`` and
    in-group sparsity ``s``. ``zeta`` bounds the diagonal normalization and
    is always >= 1 for unit-norm atoms.
    """

    nu_p: float
    mu_p_s: float
    mu_p_ss: float
    zeta: float
    k: int
    s: int


@dataclass(frozen=True)
class RecoveryCertificate:
    """Outcome of a sufficient-condition check for exact noiseless recovery.

    ``alpha`` is the value of the group-level condition (the block spectral
    norm of the obliquely projected off-support dictionary in instance mode,
    or its dictionary-only upper bound in uniform mode). ``gamma_bound`` is
    the admissible limit for the l1-level condition; it is ``math.inf`` in
    pure group mode (``lam = 1``). A non-positive denominator in uniform
    mode is reported through ``reason`` rather than an exception.
    """

    alpha: float
    gamma_bound: float
    gamma_lhs: float
    cond3_lhs: float
    cond1_holds: bool
    cond2_holds: bool
    cond3_holds: bool
    mode: str
    lam: float
    reason: str | None = None

    @property
    def holds(self) -> bool:
        return self.cond1_holds and self.cond2_holds and self.cond3_holds


def _spectral_norm(Z: np.ndarray) -> float:
    if Z.size == 0:
        return 0.0
    return float(np.linalg.svd(Z, compute_uv=False)[0])


def _gram(D: Dictionary) -> np.ndarray:
    return D.matrix.T @ D.matrix


def standard_coherence(D: Dictionary) -> float:
    """Largest absolute inner product between two distinct atoms."""
    if D.p < 2:
        raise ValueError("coherence needs at least two atoms")
    G = np.abs(_gram(D))
    np.fill_diagonal(G, 0.0)
    return float(G.max())


def _require_uniform(D: Dictionary) -> int:
    if not D.partition.is_uniform:
        raise ValueError("this measure requires uniform group sizes")
    return D.partition.uniform_size


def block_coherence(D: Dictionary) -> float:
    """Largest per-size-normalized spectral norm of an inter-group Gram block."""
    g = _require_uniform(D)
    groups = D.partition.groups
    best = 0.0
    for a, b in combinations(range(len(groups)), 2):
        Z = D.matrix[:, groups[a]].T @ D.matrix[:, groups[b]]
        best = max(best, _spectral_norm(Z) / g)
    return best


def cross_coherence(D: Dictionary) -> float:
    """Largest absolute inner product between atoms of different groups."""
    _require_uniform(D)
    G = np.abs(_gram(D))
    best = 0.0
    groups = D.partition.groups
    for a, b in combinations(range(len(groups)), 2):
        block = G[np.ix_(groups[a], groups[b])]
        if block.size:
            best = max(best, float(block.max()))
    return best


def sub_coherence(D: Dictionary) -> float:
    """Largest absolute inner product between distinct atoms of one group.

    Zero by definition when every group is a singleton.
    """
    g = _require_uniform(D)
    if g == 1:
        return 0.0
    G = np.abs(_gram(D))
    np.fill_diagonal(G, 0.0)
    best = 0.0
    for idx in D.partition.groups:
        block = G[np.ix_(idx, idx)]
        best = max(best, float(block.max()))
    return best


def _check_cap(n_evals: int, cap: int) -> None:
    if n_evals > cap:
        raise EnumerationCapError(
            f"exact enumeration needs {n_evals} subset evaluations "
            f"(cap {cap}); subsample for a lower bound or reduce s"
        )


def sparse_singular_value_ss(
    Z: np.ndarray,
    s: int,
    cap: int = DEFAULT_ENUM_CAP,
    subsample: int | None = None,
    rng: np.random.Generator | None = None,
) -> float:
    """Largest spectral norm over all ``s x s`` row/column submatrices of Z.

    Exact by enumeration in lexicographic order. With ``subsample`` set, a
    seeded random sample of subset pairs is evaluated instead and the result
    is only a lower bound.
    """
    Z = np.asarray(Z, dtype=float)
    a, b = Z.shape
    if not 1 <= s <= min(a, b):
        raise ValueError(f"need 1 <= s <= min{Z.shape}")
    if s == a and s == b:
        return _spectral_norm(Z)
    if subsample is not None:
        if rng is None:
            raise ValueError("subsampling (lower bound only) requires a seeded rng")
        best = 0.0
        for _ in range(subsample):
            rows = rng.choice(a, size=s, replace=False)
            cols = rng.choice(b, size=s, replace=False)
            best = max(best, _spectral_norm(Z[np.ix_(rows, cols)]))
        return best
    _check_cap(math.comb(a, s) * math.comb(b, s), cap)
    best = 0.0
    for rows in combinations(range(a), s):
        Zr = Z[list(rows), :]
        for cols in combinations(range(b), s):
            best = max(best, _spectral_norm(Zr[:, list(cols)]))
    return best


def sparse_matrix_norm_s(
    Z: np.ndarray,
    s: int,
    cap: int = DEFAULT_ENUM_CAP,
    subsample: int | None = None,
    rng: np.random.Generator | None = None,
) -> float:
    """Largest spectral norm over all ``s``-column submatrices of Z.

    The square root of the largest s-sparse eigenvalue of ``Z^T Z``; exact
    by enumeration unless ``subsample`` requests a seeded lower bound.
    """
    Z = np.asarray(Z, dtype=float)
    b = Z.shape[1]
    if not 1 <= s <= b:
        raise ValueError(f"need 1 <= s <= {b}")
    if s == b:
        return _spectral_norm(Z)
    if subsample is not None:
        if rng is None:
            raise ValueError("subsampling (lower bound only) requires a seeded rng")
        best = 0.0
        for _ in range(subsample):
            cols = rng.choice(b, size=s, replace=False)
            best = max(best, _spectral_norm(Z[:, cols]))
        return best
    _check_cap(math.comb(b, s), cap)
    best = 0.0
    for cols in combinations(range(b), s):
        best = max(best, _spectral_norm(Z[:, list(cols)]))
    return best


def sparse_block_coherences(
    D: Dictionary, s: int, cap: int = DEFAULT_ENUM_CAP
) -> tuple[float, float]:
    """Sparse block coherences ``(mu_block_ss, mu_block_s)`` at sparsity ``s``.

    Maxima over ordered pairs of distinct groups of the size-normalized
    sparse singular value / sparse matrix norm of the inter-group Gram
    block.
    """
    g = _require_uniform(D)
    if not 1 <= s <= g:
        raise ValueError("need 1 <= s <= group size")
    groups = D.partition.groups
    q = len(groups)
    n_pairs = q * (q - 1)
    _check_cap(n_pairs * math.comb(g, s) ** 2, cap)
    best_ss = 0.0
    best_s = 0.0
    for a in range(q):
        for b in range(q):
            if a == b:
                continue
            Z = D.matrix[:, groups[a]].T @ D.matrix[:, groups[b]]
            best_ss = max(best_ss, sparse_singular_value_ss(Z, s, cap=cap) / g)
            best_s = max(best_s, sparse_matrix_norm_s(Z, s, cap=cap) / g)
    return best_ss, best_s


def coherence_report(D: Dictionary, s: int, cap: int = DEFAULT_ENUM_CAP) -> CoherenceReport:
    """All coherence measures of a dictionary at in-group sparsity ``s``."""
    mu_ss, mu_s = sparse_block_coherences(D, s, cap=cap)
    return CoherenceReport(
        mu=standard_coherence(D),
        mu_block=block_coherence(D),
        chi=cross_coherence(D),
        nu=sub_coherence(D),
        mu_block_ss=mu_ss,
        mu_block_s=mu_s,
        s=s,
    )


def _orthonormal_range_basis(M: np.ndarray) -> np.ndarray:
    """Orthonormal basis of the column space, tolerant of rank deficiency."""
    if M.size == 0:
        return np.zeros((M.shape[0], 0))
    U, sv, _ = np.linalg.svd(M, full_matrices=False)
    rank = int(np.sum(sv > _RANK_TOL * sv[0])) if sv.size else 0
    return U[:, :rank]


def _iter_supports(partition: GroupPartition, k: int, s: int):
    q = partition.q
    per_group = list(combinations(range(len(partition.groups[0])), s))
    for active in combinations(range(q), k):
        for chosen in product(per_group, repeat=k):
            yield SupportSpec(active, chosen)


def projected_coherences(
    D: Dictionary,
    k: int,
    s: int,
    cap: int = DEFAULT_ENUM_CAP,
    subsample: int | None = None,
    rng: np.random.Generator | None = None,
) -> ProjectedCoherences:
    """Worst-case projected coherence measures over all support placements.

    For each admissible support the dictionary is projected onto the
    orthogonal complement of the inactive in-block atoms, and four measures
    are accumulated: the normalized in-support cross products (``nu_p``),
    the size-normalized sparse norms of inter-group blocks between the
    dictionary and its projected image (``mu_p_s``, ``mu_p_ss``), and the
    diagonal scaling bound ``zeta``. With ``subsample`` set, a seeded random
    sample of supports is used and all values are lower bounds only.
    """
    g = _require_uniform(D)
    q = D.partition.q
    if not 1 <= k <= q:
        raise ValueError("need 1 <= k <= q")
    if not 1 <= s <= g:
        raise ValueError("need 1 <= s <= g")
    n_supports = math.comb(q, k) * math.comb(g, s) ** k
    if subsample is None:
        _check_cap(n_supports * q * (q - 1) * math.comb(g, s) ** 2, cap)
        supports = _iter_supports(D.partition, k, s)
    else:
        if rng is None:
            raise ValueError("subsampling (lower bound only) requires a seeded rng")
        supports = (_random_support(D.partition, k, s, rng) for _ in range(subsample))

    Dm = D.matrix
    groups = D.partition.groups
    nu_p = 0.0
    mu_p_s = 0.0
    mu_p_ss = 0.0
    zeta_sq = 1.0
    for support in supports:
        t0 = support.t0_indices(D.partition)
        if t0.size:
            B = _orthonormal_range_basis(Dm[:, t0])
            C = Dm - B @ (B.T @ Dm)
        else:
            C = Dm
        diag = np.einsum("ij,ij->j", Dm, C)
        s0 = support.s0_indices(D.partition)
        dmin = float(diag[s0].min())
        if dmin <= 1e-20:
            raise AssumptionViolatedError(
                "an active atom is annihilated by the projection; "
                "the active-block atoms are linearly dependent"
            )
        zeta_sq = max(zeta_sq, 1.0 / dmin)
        if s > 1:
            for r, sup in zip(support.active_groups, support.within_group_supports):
                idx = groups[r][list(sup)]
                cross = Dm[:, idx].T @ C[:, idx]
                scale = np.sqrt(np.outer(diag[idx], diag[idx]))
                ratio = np.abs(cross) / scale
                np.fill_diagonal(ratio, 0.0)
                nu_p = max(nu_p, float(ratio.max()))
        for a in range(q):
            for b in range(q):
                if a == b:
                    continue
                Z = Dm[:, groups[a]].T @ C[:, groups[b]]
                mu_p_ss = max(mu_p_ss, sparse_singular_value_ss(Z, s, cap=cap) / g)
                mu_p_s = max(mu_p_s, sparse_matrix_norm_s(Z, s, cap=cap) / g)
    return ProjectedCoherences(
        nu_p=nu_p, mu_p_s=mu_p_s, mu_p_ss=mu_p_ss, zeta=math.sqrt(zeta_sq), k=k, s=s
    )


def _random_support(
    partition: GroupPartition, k: int, s: int, rng: np.random.Generator
) -> SupportSpec:
    active = tuple(int(r) for r in np.sort(rng.choice(partition.q, size=k, replace=False)))
    g = partition.uniform_size
    chosen = tuple(
        tuple(int(i) for i in np.sort(rng.choice(g, size=s, replace=False)))
        for _ in range(k)
    )
    return SupportSpec(active, chosen)


def _check_partition_tiles(parts, size: int, what: str) -> None:
    idx = np.concatenate([np.asarray(b, dtype=np.intp) for b in parts]) if parts else np.empty(0, np.intp)
    if len(idx) != size or len(np.unique(idx)) != size or (size and (idx.min() < 0 or idx.max() >= size)):
        raise ValueError(f"{what} partition does not tile the matrix")


def block_spectral_norm(Z: np.ndarray, row_partition, col_partition) -> float:
    """Mixed block norm: max over column blocks of the summed spectral norms
    of the blocks in that column."""
    Z = np.asarray(Z, dtype=float)
    rows = [np.asarray(b, dtype=np.intp) for b in row_partition]
    cols = [np.asarray(b, dtype=np.intp) for b in col_partition]
    _check_partition_tiles(rows, Z.shape[0], "row")
    _check_partition_tiles(cols, Z.shape[1], "column")
    best = 0.0
    for cb in cols:
        total = math.fsum(_spectral_norm(Z[np.ix_(rb, cb)]) for rb in rows)
        best = max(best, total)
    return best


def norm_1_1(Z: np.ndarray) -> float:
    """Largest column l1 norm."""
    Z = np.asarray(Z, dtype=float)
    if Z.size == 0:
        return 0.0
    return float(np.abs(Z).sum(axis=0).max())


def gamma_bound(lam: float, alpha: float, g: int) -> float:
    """Admissible bound for the l1-level condition: ``1 + lam(1-alpha)/(sqrt(g)(1-lam))``.

    Unbounded (``math.inf``) in pure group mode ``lam = 1``; never computed
    through a floating-point division by zero.
    """
    if not 0.0 <= lam <= 1.0:
        raise ValueError("lam must lie in [0, 1]")
    if lam == 1.0:
        return math.inf
    return 1.0 + lam * (1.0 - alpha) / (math.sqrt(g) * (1.0 - lam))


def instance_conditions(
    D: Dictionary,
    support: SupportSpec,
    lam: float,
    alpha: float | None = None,
) -> RecoveryCertificate:
    """Evaluate the support-dependent sufficient conditions for exact recovery.

    Builds the Moore-Penrose left inverse of the active-atom subdictionary
    and the oblique left inverse that additionally annihilates the inactive
    atoms of active groups, then checks three conditions: the block spectral
    norm of the obliquely mapped off-support atoms stays below ``alpha``,
    the largest column l1 norm of the pseudo-inverted off-support atoms
    stays below the ``gamma`` bound at ``(lam, alpha)``, and the same norm
    over the in-block inactive atoms stays below one.

    With ``alpha=None`` the computed block spectral norm itself is used; the
    first condition then reads "some admissible alpha <= 1 exists", which is
    exactly ``rho_c < 1``.

    Raises
    ------
    AssumptionViolatedError
        When the active-block atoms are linearly dependent or the oblique
        inverse is numerically unavailable; never a silent fallback.
    """
    if not 0.0 <= lam <= 1.0:
        raise ValueError("lam must lie in [0, 1]")
    g = _require_uniform(D)
    support.validate_with(D.partition)
    partition = D.partition
    k, s = support.k, support.s

    g0 = np.concatenate([partition.groups[r] for r in support.active_groups])
    if len(g0) > D.m:
        raise AssumptionViolatedError(
            "active blocks hold more atoms than the signal dimension; "
            "their columns cannot be linearly independent"
        )
    sv = np.linalg.svd(D.matrix[:, g0], compute_uv=False)
    if sv[-1] <= _RANK_TOL * sv[0]:
        raise AssumptionViolatedError("active-block atoms are linearly dependent")

    s0 = support.s0_indices(partition)
    t0 = support.t0_indices(partition)
    inactive = support.inactive_groups(partition)
    DS0 = D.matrix[:, s0]
    H = np.linalg.solve(DS0.T @ DS0, DS0.T)

    if t0.size:
        B = _orthonormal_range_basis(D.matrix[:, t0])
        CS0 = DS0 - B @ (B.T @ DS0)
    else:
        CS0 = DS0
    M = DS0.T @ CS0
    try:
        Q = np.linalg.solve(M, CS0.T)
    except np.linalg.LinAlgError as exc:
        raise AssumptionViolatedError(
            "the obliquely projected Gram matrix is singular"
        ) from exc
    if t0.size and float(np.max(np.abs(Q @ D.matrix[:, t0]))) > 1e-9:
        raise AssumptionViolatedError(
            "oblique inverse does not annihilate the in-block inactive atoms"
        )
    if float(np.max(np.abs(Q @ DS0 - np.eye(len(s0))))) > 1e-9:
        raise AssumptionViolatedError(
            "oblique inverse is not a left inverse of the active atoms"
        )

    if inactive:
        gbar0 = support.gbar0_indices(partition)
        row_blocks = [np.arange(i * s, (i + 1) * s) for i in range(k)]
        col_blocks = [np.arange(i * g, (i + 1) * g) for i in range(len(inactive))]
        rho_c = block_spectral_norm(Q @ D.matrix[:, gbar0], row_blocks, col_blocks)
        g_lhs = norm_1_1(H @ D.matrix[:, gbar0])
    else:
        rho_c = 0.0
        g_lhs = 0.0
    c3_lhs = norm_1_1(H @ D.matrix[:, t0]) if t0.size else 0.0

    if alpha is None:
        alpha_used = rho_c
        cond1 = rho_c < 1.0
    else:
        if not np.isfinite(alpha):
            raise ValueError("alpha must be finite")
        alpha_used = float(alpha)
        cond1 = rho_c < alpha_used <= 1.0
    gb = gamma_bound(lam, alpha_used, g)
    return RecoveryCertificate(
        alpha=rho_c,
        gamma_bound=gb,
        gamma_lhs=g_lhs,
        cond3_lhs=c3_lhs,
        cond1_holds=cond1,
        cond2_holds=g_lhs < gb,
        cond3_holds=c3_lhs < 1.0,
        mode="instance",
        lam=lam,
    )


def theorem2_check(
    report: CoherenceReport,
    proj: ProjectedCoherences,
    k: int,
    s: int,
    g: int,
    lam: float,
) -> RecoveryCertificate:
    """Evaluate the uniform (dictionary-only) sufficient recovery conditions.

    The three left-hand sides are

        alpha_lhs = zeta^2 k g mu_p_s      / (1 - (s-1) nu_p - (k-1) g mu_p_ss zeta^2)
        cond2_lhs = k s chi                / (1 - (s-1) nu  - (k-1) s chi)
        cond3_lhs = s (nu + (k-1) chi)     / (1 - (s-1) nu  - (k-1) s chi)

    and the certificate holds when both denominators are positive,
    ``alpha_lhs <= 1``, ``cond2_lhs`` is below the gamma bound at
    ``(lam, alpha_lhs)`` and ``cond3_lhs < 1``. Non-positive denominators
    yield a failed certificate with a reason code, not an exception.

    The third numerator counts, for a column of the in-block inactive Gram
    slice, ``s`` same-block products (bounded by the sub-coherence) plus
    ``(k-1) s`` cross-block products (bounded by the cross coherence); with
    a single active group it reduces to ``s nu``. Each uniform left-hand
    side upper-bounds the corresponding support-level quantity of
    :func:`instance_conditions` for every admissible support, so a holding
    uniform certificate implies every instance certificate.
    """
    if not 0.0 <= lam <= 1.0:
        raise ValueError("lam must lie in [0, 1]")
    if report.s != s or proj.s != s or proj.k != k:
        raise ValueError("report/projected measures were computed for different (k, s)")
    reasons = []
    den_alpha = 1.0 - (s - 1) * proj.nu_p - (k - 1) * g * proj.mu_p_ss * proj.zeta**2
    den_supp = 1.0 - (s - 1) * report.nu - (k - 1) * s * report.chi
    if den_alpha <= 0:
        reasons.append("alpha-denominator-nonpositive")
        alpha_lhs = math.inf
        cond1 = False
        gb = gamma_bound(lam, 1.0, g)
    else:
        alpha_lhs = proj.zeta**2 * k * g * proj.mu_p_s / den_alpha
        cond1 = alpha_lhs <= 1.0
        gb = gamma_bound(lam, alpha_lhs, g)
    if den_supp <= 0:
        reasons.append("support-denominator-nonpositive")
        cond2_lhs = math.inf
        cond3_lhs = math.inf
        cond2 = False
        cond3 = False
    else:
        cond2_lhs = k * s * report.chi / den_supp
        cond3_lhs = s * (report.nu + (k - 1) * report.chi) / den_supp
        cond2 = cond2_lhs < gb
        cond3 = cond3_lhs < 1.0
    return RecoveryCertificate(
        alpha=alpha_lhs,
        gamma_bound=gb,
        gamma_lhs=cond2_lhs,
        cond3_lhs=cond3_lhs,
        cond1_holds=cond1,
        cond2_holds=cond2,
        cond3_holds=cond3,
        mode="uniform",
        lam=lam,
        reason="; ".join(reasons) if reasons else None,
    )
