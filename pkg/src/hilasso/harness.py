"""Synthetic source-identification experiments and recovery metrics.

The generator plants a shared set of ``k`` active groups across ``n``
signals; every signal mixes its own ``s``-sparse combination from each
active group, is normalized, and optionally receives additive Gaussian
noise and an i.i.d. observation mask. The experiment driver codes the same
data with any subset of the five models, selects regularization weights per
method by grid search on the code MSE, and reports MSE and support metrics.
Everything is deterministic given the config seed.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field, replace

import numpy as np

from .analysis import SupportSpec
from .model import (
    CodeMatrix,
    Dictionary,
    GroupPartition,
    RegularizerSpec,
    SignalSet,
)
from .solver import SolverConfig, SolverResult, sparsa_solve

__all__ = [
    "DEFAULT_LAMBDA_GRIDS",
    "MISSING_DEMO_LAMBDA_GRIDS",
    "ExperimentConfig",
    "MethodResult",
    "ExperimentResult",
    "small_scale_config",
    "full_scale_config",
    "generate_synthetic",
    "support_metrics",
    "run_experiment",
    "run_missing_data_demo",
]

#: Per-method (lambda1, lambda2) candidates used when a config carries no grid.
#: Collaborative lambda2 values are per-signal weights; the sqrt(n) scaling is
#: applied separately when the config requests it. Calibrated for the default
#: (small-scale) configuration; pass an explicit grid for other regimes.
DEFAULT_LAMBDA_GRIDS: dict[str, tuple[tuple[float, float], ...]] = {
    "lasso": ((0.01, 0.0), (0.05, 0.0), (0.1, 0.0), (0.2, 0.0)),
    "glasso": ((0.0, 0.1), (0.0, 0.3), (0.0, 0.6), (0.0, 1.0)),
    "hilasso": ((0.02, 0.1), (0.05, 0.2), (0.08, 0.2), (0.1, 0.3)),
    "cglasso": ((0.0, 0.035), (0.0, 0.07), (0.0, 0.3), (0.0, 0.6)),
    "chilasso": ((0.02, 0.035), (0.02, 0.07), (0.05, 0.42), (0.1, 0.57)),
}

#: Grids for the masked-data comparison: the collaborative weights sit in the
#: group-identifying regime of the 60%-missing protocol, which is the point
#: of that demonstration.
MISSING_DEMO_LAMBDA_GRIDS: dict[str, tuple[tuple[float, float], ...]] = {
    "lasso": ((0.01, 0.0), (0.03, 0.0)),
    "chilasso": ((0.02, 0.2), (0.05, 0.2)),
}


@dataclass(frozen=True)
class ExperimentConfig:
    """Size, sparsity, noise and method selection for one synthetic run."""

    q: int = 8
    g: int = 32
    m: int = 64
    k: int = 2
    s: int = 8
    n: int = 50
    sigma: float = 0.0
    missing_fraction: float = 0.0
    seed: int = 0
    methods: tuple[str, ...] = ("lasso", "glasso", "hilasso", "chilasso")
    lambda_grid: dict[str, tuple[tuple[float, float], ...]] | None = None
    support_epsilon: float = 1e-4
    scale_lambda2_by_sqrt_n: bool = True
    solver: SolverConfig = field(default_factory=SolverConfig)

    def __post_init__(self) -> None:
        if not (1 <= self.k <= self.q):
            raise ValueError("need 1 <= k <= q")
        if not (1 <= self.s <= self.g):
            raise ValueError("need 1 <= s <= g")
        if self.m < 1 or self.n < 1:
            raise ValueError("m and n must be >= 1")
        if not 0.0 <= self.missing_fraction < 1.0:
            raise ValueError("missing_fraction must lie in [0, 1)")
        if self.sigma < 0:
            raise ValueError("sigma must be >= 0")
        if self.support_epsilon <= 0:
            raise ValueError("support_epsilon must be positive")
        unknown = set(self.methods) - set(DEFAULT_LAMBDA_GRIDS)
        if unknown:
            raise ValueError(f"unknown methods: {sorted(unknown)}")

    def grid_for(self, method: str) -> tuple[tuple[float, float], ...]:
        if self.lambda_grid and method in self.lambda_grid:
            return tuple(tuple(pair) for pair in self.lambda_grid[method])
        return DEFAULT_LAMBDA_GRIDS[method]


def small_scale_config(**overrides) -> ExperimentConfig:
    """Small configuration that runs in CI-scale time."""
    return replace(ExperimentConfig(), **overrides) if overrides else ExperimentConfig()


def full_scale_config(**overrides) -> ExperimentConfig:
    """Full-size configuration (64-atom groups, 200 signals)."""
    cfg = ExperimentConfig(q=8, g=64, m=64, k=2, s=8, n=200, sigma=0.1)
    return replace(cfg, **overrides) if overrides else cfg


@dataclass(frozen=True)
class MethodResult:
    """Best-grid-point metrics for one method.

    ``runtime`` covers all grid points solved for the method and is excluded
    from serialized reports to keep them reproducible.
    """

    mse_e4: float
    hamming: float
    group_hamming: float
    runtime: float
    lambda1: float
    lambda2: float
    converged: bool

    def __post_init__(self) -> None:
        for name in ("mse_e4", "hamming", "group_hamming"):
            v = getattr(self, name)
            if not np.isfinite(v) or v < 0:
                raise ValueError(f"{name} must be finite and >= 0")


@dataclass(frozen=True)
class ExperimentResult:
    """Per-method metrics plus the generating configuration."""

    per_method: dict[str, MethodResult]
    config: ExperimentConfig


def generate_synthetic(
    config: ExperimentConfig,
) -> tuple[Dictionary, SignalSet, CodeMatrix, SupportSpec]:
    """Draw one synthetic source-identification instance.

    The dictionary has i.i.d. standard normal entries with columns
    normalized to unit norm. ``k`` active groups are shared by all signals;
    each signal draws its own ``s``-subset and standard normal coefficients
    per active group. Every clean mixture column is normalized to unit norm
    (rescaling its true code accordingly) before noise and masking are
    applied. The returned support describes the shared active groups with
    the within-group supports of the first signal.
    """
    rng = np.random.default_rng(config.seed)
    q, g, m, k, s, n = config.q, config.g, config.m, config.k, config.s, config.n
    p = q * g
    partition = GroupPartition.uniform(q, g)
    D = Dictionary.normalize(rng.standard_normal((m, p)), partition)

    active = np.sort(rng.choice(q, size=k, replace=False))
    A = np.zeros((p, n))
    first_supports: list[tuple[int, ...]] = []
    for j in range(n):
        for r in active:
            rel = np.sort(rng.choice(g, size=s, replace=False))
            A[partition.groups[r][rel], j] = rng.standard_normal(s)
            if j == 0:
                first_supports.append(tuple(int(i) for i in rel))

    clean = D.matrix @ A
    norms = np.linalg.norm(clean, axis=0)
    if np.any(norms == 0.0):
        raise ValueError("degenerate draw: a clean mixture column is zero")
    clean = clean / norms
    A = A / norms

    noise = rng.standard_normal((m, n))
    X = clean + config.sigma * noise

    mask = None
    if config.missing_fraction > 0:
        mask = rng.random((m, n)) >= config.missing_fraction
        for j in np.flatnonzero(~mask.any(axis=0)):
            mask[int(rng.integers(m)), j] = True

    support = SupportSpec(tuple(int(r) for r in active), tuple(first_supports))
    return D, SignalSet(X, mask), CodeMatrix(A), support


def support_metrics(
    A_est: CodeMatrix | np.ndarray,
    A_true: CodeMatrix | np.ndarray,
    partition: GroupPartition,
    epsilon: float = 1e-4,
) -> tuple[float, float, float]:
    """Code MSE (x 1e4) and mean per-signal support Hamming distances.

    An atom is counted active when its coefficient magnitude exceeds
    ``epsilon``; a group is active when the Euclidean norm of its
    coefficient sub-vector exceeds ``epsilon``. Hamming distances are
    symmetric differences against the true supports, averaged over signals.
    """
    est = A_est.matrix if isinstance(A_est, CodeMatrix) else np.asarray(A_est, dtype=float)
    true = A_true.matrix if isinstance(A_true, CodeMatrix) else np.asarray(A_true, dtype=float)
    if est.shape != true.shape:
        raise ValueError(f"shape mismatch: {est.shape} vs {true.shape}")
    if est.shape[0] != partition.p:
        raise ValueError("code rows do not match the partition")
    p, n = est.shape
    diff = est - true
    mse_e4 = 1e4 * math.fsum((diff * diff).ravel().tolist()) / (p * n)

    sup_est = np.abs(est) > epsilon
    sup_true = np.abs(true) > epsilon
    hamming = math.fsum((sup_est ^ sup_true).sum(axis=0).tolist()) / n

    eps_sq = epsilon * epsilon
    mism = np.zeros(n)
    for g_idx in partition.groups:
        act_est = _group_active(est, g_idx, eps_sq)
        act_true = _group_active(true, g_idx, eps_sq)
        mism += (act_est ^ act_true).astype(float)
    group_hamming = math.fsum(mism.tolist()) / n
    return mse_e4, hamming, group_hamming


def _group_active(code: np.ndarray, g_idx: np.ndarray, eps_sq: float) -> np.ndarray:
    block = code[g_idx, :]
    sq = np.array([math.fsum((block[:, j] * block[:, j]).tolist())
                   for j in range(block.shape[1])])
    return sq > eps_sq


def _solve_method(
    method: str,
    D: Dictionary,
    X: SignalSet,
    A_true: CodeMatrix,
    config: ExperimentConfig,
) -> tuple[MethodResult, np.ndarray]:
    collaborative = method in ("cglasso", "chilasso")
    scale = math.sqrt(X.n) if (collaborative and config.scale_lambda2_by_sqrt_n) else 1.0
    best: tuple[float, MethodResult, np.ndarray] | None = None
    runtime = 0.0
    for lam1, lam2 in config.grid_for(method):
        spec = RegularizerSpec.for_mode(method, lam1, lam2 * scale)
        start = time.perf_counter()
        res: SolverResult = sparsa_solve(D, X, spec, config=config.solver)
        runtime += time.perf_counter() - start
        est = np.asarray(res.code.matrix)
        mse, ham, gham = support_metrics(est, A_true, D.partition, config.support_epsilon)
        candidate = MethodResult(
            mse_e4=mse,
            hamming=ham,
            group_hamming=gham,
            runtime=runtime,
            lambda1=spec.lambda1,
            lambda2=spec.lambda2,
            converged=res.converged,
        )
        if best is None or mse < best[0]:
            best = (mse, candidate, est)
    assert best is not None
    _, chosen, est = best
    return replace(chosen, runtime=runtime), est


def run_experiment(config: ExperimentConfig) -> ExperimentResult:
    """Generate one instance and code it with every configured method.

    For each method the ``(lambda1, lambda2)`` pair with the lowest code MSE
    on its grid is reported; collaborative lambda2 values are scaled by
    ``sqrt(n)`` when the config requests it. Solver non-convergence is
    recorded in the result, not raised.
    """
    D, X, A_true, _ = generate_synthetic(config)
    per_method: dict[str, MethodResult] = {}
    for method in config.methods:
        per_method[method], _ = _solve_method(method, D, X, A_true, config)
    return ExperimentResult(per_method=per_method, config=config)


def run_missing_data_demo(
    config: ExperimentConfig,
) -> tuple[ExperimentResult, dict[str, np.ndarray]]:
    """Collaborative vs. plain l1 coding of masked mixtures.

    Runs the collaborative hierarchical model and the lasso on the same
    masked instance and returns, besides the metrics, the binary
    active-set matrix (atoms x signals) of each method for offline
    plotting. When the config carries no explicit grid, the
    group-identification grids in ``MISSING_DEMO_LAMBDA_GRIDS`` are used.
    Raises if the collaborative model does not identify the shared groups
    at least as well as the lasso.
    """
    cfg = replace(
        config,
        methods=("lasso", "chilasso"),
        lambda_grid=config.lambda_grid or MISSING_DEMO_LAMBDA_GRIDS,
    )
    D, X, A_true, _ = generate_synthetic(cfg)
    per_method: dict[str, MethodResult] = {}
    active_sets: dict[str, np.ndarray] = {}
    for method in cfg.methods:
        result, est = _solve_method(method, D, X, A_true, cfg)
        per_method[method] = result
        active_sets[method] = np.abs(est) > cfg.support_epsilon
    if per_method["chilasso"].group_hamming > per_method["lasso"].group_hamming:
        raise RuntimeError(
            "collaborative coding identified the active groups worse than "
            "independent lasso; check the regularization grid"
        )
    return ExperimentResult(per_method=per_method, config=cfg), active_sets
