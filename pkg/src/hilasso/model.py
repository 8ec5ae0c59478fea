"""Core data types and composite objectives for hierarchical sparse coding.

The five supported models share one objective template

    1/2 ||M o (X - D A)||_F^2  +  lambda2 * psi_G(A)  +  lambda1 * sum_j ||a_j||_1

where ``psi_G`` is the group regularizer (a sum of per-group l2 norms for a
single signal, or per-group Frobenius norms in the collaborative case) and
``M`` is an optional observation mask for signals with missing entries.
Setting ``lambda2 = 0`` gives the lasso, ``lambda1 = 0`` the (collaborative)
group lasso, and both positive the (collaborative) hierarchical lasso.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "UNIT_NORM_TOL",
    "MODES",
    "GroupPartition",
    "Dictionary",
    "SignalSet",
    "CodeMatrix",
    "RegularizerSpec",
    "group_regularizer",
    "objective",
]

# Column norms of a Dictionary must match 1 to within this tolerance.
UNIT_NORM_TOL = 1e-9

#: mode name -> (uses lambda1, uses lambda2, collaborative)
MODES = {
    "lasso": (True, False, False),
    "glasso": (False, True, False),
    "hilasso": (True, True, False),
    "cglasso": (False, True, True),
    "chilasso": (True, True, True),
}


def _readonly(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


def _fsum_columns(values: np.ndarray) -> float:
    """Exactly rounded sum of a 1-d array of per-column contributions.

    Using :func:`math.fsum` for every cross-column reduction makes all
    objective values invariant under signal permutations, bit for bit.
    """
    return math.fsum(values.tolist())


@dataclass(frozen=True, eq=False)
class GroupPartition:
    """Partition of the atom indices ``{0, ..., p-1}`` into disjoint groups.

    Parameters
    ----------
    groups : sequence of index sequences
        One entry per group, each a non-empty collection of 0-based atom
        indices. Groups must be pairwise disjoint and cover ``{0, ..., p-1}``.
    p : int
        Total number of atoms.
    """

    groups: tuple[np.ndarray, ...]
    p: int

    def __post_init__(self) -> None:
        cleaned = []
        for i, g in enumerate(self.groups):
            idx = np.unique(np.asarray(g, dtype=np.intp))
            if idx.size == 0:
                raise ValueError(f"group {i} is empty")
            if len(idx) != len(np.asarray(g)):
                raise ValueError(f"group {i} contains repeated indices")
            cleaned.append(_readonly(idx))
        object.__setattr__(self, "groups", tuple(cleaned))
        if self.p < 1:
            raise ValueError("p must be >= 1")
        allidx = np.concatenate(self.groups) if self.groups else np.empty(0, np.intp)
        if len(allidx) != self.p or len(np.unique(allidx)) != self.p:
            raise ValueError("groups must be disjoint and cover all atoms")
        if allidx.min() < 0 or allidx.max() >= self.p:
            raise ValueError("group indices out of range")

    @classmethod
    def uniform(cls, q: int, g: int) -> "GroupPartition":
        """``q`` consecutive groups of ``g`` atoms each."""
        if q < 1 or g < 1:
            raise ValueError("q and g must be >= 1")
        return cls(tuple(np.arange(r * g, (r + 1) * g) for r in range(q)), q * g)

    @classmethod
    def singletons(cls, p: int) -> "GroupPartition":
        """One group per atom; the group regularizer degenerates to l1."""
        return cls(tuple(np.array([i]) for i in range(p)), p)

    @property
    def q(self) -> int:
        return len(self.groups)

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(len(g) for g in self.groups)

    @property
    def is_uniform(self) -> bool:
        sizes = self.sizes
        return all(s == sizes[0] for s in sizes)

    @property
    def uniform_size(self) -> int:
        if not self.is_uniform:
            raise ValueError("partition does not have uniform group sizes")
        return len(self.groups[0])


@dataclass(frozen=True, eq=False)
class Dictionary:
    """Real ``m x p`` dictionary with unit-norm columns and a group partition."""

    matrix: np.ndarray
    partition: GroupPartition

    def __post_init__(self) -> None:
        mat = np.array(self.matrix, dtype=float, copy=True)
        if mat.ndim != 2 or mat.shape[0] < 1 or mat.shape[1] < 1:
            raise ValueError("dictionary must be a non-empty 2-d matrix")
        if not np.all(np.isfinite(mat)):
            raise ValueError("dictionary entries must be finite")
        if mat.shape[1] != self.partition.p:
            raise ValueError(
                f"partition covers {self.partition.p} atoms, dictionary has {mat.shape[1]}"
            )
        norms = np.linalg.norm(mat, axis=0)
        if np.any(np.abs(norms - 1.0) > UNIT_NORM_TOL):
            raise ValueError(
                "dictionary columns must have unit norm; use Dictionary.normalize"
            )
        object.__setattr__(self, "matrix", _readonly(mat))

    @classmethod
    def normalize(cls, matrix: np.ndarray, partition: GroupPartition) -> "Dictionary":
        """Build a dictionary by dividing every column by its Euclidean norm."""
        mat = np.array(matrix, dtype=float, copy=True)
        if mat.ndim != 2:
            raise ValueError("dictionary must be a 2-d matrix")
        norms = np.linalg.norm(mat, axis=0)
        if np.any(norms == 0.0):
            raise ValueError("cannot normalize an all-zero dictionary column")
        return cls(mat / norms, partition)

    @property
    def m(self) -> int:
        return self.matrix.shape[0]

    @property
    def p(self) -> int:
        return self.matrix.shape[1]


@dataclass(frozen=True, eq=False)
class SignalSet:
    """Observed signals, one per column, with an optional observation mask.

    ``mask[i, j]`` is true when entry ``(i, j)`` of ``matrix`` was observed;
    a missing mask means fully observed data. Every signal must have at
    least one observed entry.
    """

    matrix: np.ndarray
    mask: np.ndarray | None = None

    def __post_init__(self) -> None:
        mat = np.array(self.matrix, dtype=float, copy=True)
        if mat.ndim == 1:
            mat = mat[:, None]
        if mat.ndim != 2 or mat.shape[0] < 1 or mat.shape[1] < 1:
            raise ValueError("signals must form a non-empty 2-d matrix")
        if not np.all(np.isfinite(mat)):
            raise ValueError("signal entries must be finite")
        object.__setattr__(self, "matrix", _readonly(mat))
        if self.mask is not None:
            msk = np.array(self.mask, dtype=bool, copy=True)
            if msk.shape != mat.shape:
                raise ValueError(
                    f"mask shape {msk.shape} does not match signals {mat.shape}"
                )
            if np.any(~msk.any(axis=0)):
                raise ValueError("every signal must have at least one observed entry")
            object.__setattr__(self, "mask", _readonly(msk))

    @property
    def m(self) -> int:
        return self.matrix.shape[0]

    @property
    def n(self) -> int:
        return self.matrix.shape[1]


@dataclass(frozen=True, eq=False)
class CodeMatrix:
    """``p x n`` coefficient matrix, one code vector per signal."""

    matrix: np.ndarray

    def __post_init__(self) -> None:
        mat = np.array(self.matrix, dtype=float, copy=True)
        if mat.ndim == 1:
            mat = mat[:, None]
        if mat.ndim != 2:
            raise ValueError("code must be a 2-d matrix")
        if not np.all(np.isfinite(mat)):
            raise ValueError("code entries must be finite")
        object.__setattr__(self, "matrix", _readonly(mat))

    @classmethod
    def zeros(cls, p: int, n: int) -> "CodeMatrix":
        return cls(np.zeros((p, n)))

    @property
    def p(self) -> int:
        return self.matrix.shape[0]

    @property
    def n(self) -> int:
        return self.matrix.shape[1]


@dataclass(frozen=True)
class RegularizerSpec:
    """Regularizer selection: weights, collaboration and group-size scaling.

    ``group_size_scaling`` weights each group norm by ``sqrt(|G|)``; it is
    off by default because every experiment here uses equal-size groups.
    A fully unregularized (pure least squares) spec must be requested
    explicitly through ``allow_unregularized``.
    """

    lambda1: float
    lambda2: float
    collaborative: bool = False
    group_size_scaling: bool = False
    allow_unregularized: bool = field(default=False, repr=False)

    def __post_init__(self) -> None:
        for name in ("lambda1", "lambda2"):
            v = getattr(self, name)
            if not np.isfinite(v) or v < 0:
                raise ValueError(f"{name} must be finite and >= 0")
        if self.lambda1 == 0 and self.lambda2 == 0 and not self.allow_unregularized:
            raise ValueError(
                "lambda1 + lambda2 must be positive "
                "(pass allow_unregularized=True for pure least squares)"
            )

    @classmethod
    def for_mode(cls, mode: str, lambda1: float, lambda2: float) -> "RegularizerSpec":
        """Spec for one of the named modes (lasso, glasso, hilasso, cglasso, chilasso)."""
        if mode not in MODES:
            raise ValueError(f"unknown mode {mode!r}; expected one of {sorted(MODES)}")
        uses_l1, uses_l2, collab = MODES[mode]
        if not uses_l1 and lambda1 != 0:
            raise ValueError(f"mode {mode!r} requires lambda1 = 0")
        if not uses_l2 and lambda2 != 0:
            raise ValueError(f"mode {mode!r} requires lambda2 = 0")
        return cls(lambda1, lambda2, collaborative=collab)


def _group_weights(partition: GroupPartition, scaling: bool) -> np.ndarray:
    if scaling:
        return np.sqrt(np.asarray(partition.sizes, dtype=float))
    return np.ones(partition.q)


def group_regularizer(
    a: np.ndarray,
    partition: GroupPartition,
    collaborative: bool = False,
    scaling: bool = False,
) -> float:
    """Group regularizer ``psi_G``.

    For a single code vector this is ``sum_G ||a[G]||_2``; for a code matrix
    it is ``sum_G ||A[G, :]||_F`` in the collaborative case and the sum of
    per-column values otherwise. With ``scaling`` each group term is weighted
    by ``sqrt(|G|)``.
    """
    arr = np.asarray(a, dtype=float)
    single = arr.ndim == 1
    if single:
        arr = arr[:, None]
    if arr.ndim != 2 or arr.shape[0] != partition.p:
        raise ValueError(
            f"code has {arr.shape[0]} rows, partition covers {partition.p} atoms"
        )
    weights = _group_weights(partition, scaling)
    terms = []
    for g_idx, w in zip(partition.groups, weights):
        block = arr[g_idx, :]
        col_sq = np.einsum("ij,ij->j", block, block)
        if collaborative or single:
            terms.append(w * math.sqrt(_fsum_columns(col_sq)))
        else:
            terms.extend((w * np.sqrt(col_sq)).tolist())
    return math.fsum(terms)


def objective(
    D: Dictionary,
    X: SignalSet,
    A: CodeMatrix | np.ndarray,
    spec: RegularizerSpec,
) -> float:
    """Composite objective value for any of the supported models.

    Masked (unobserved) residual entries are excluded from the data term;
    the regularizers are unaffected by the mask.
    """
    code = A.matrix if isinstance(A, CodeMatrix) else np.asarray(A, dtype=float)
    if code.ndim != 2 or code.shape != (D.p, X.n):
        raise ValueError(
            f"code shape {code.shape} inconsistent with dictionary/signals "
            f"({D.p} x {X.n} expected)"
        )
    if D.m != X.m:
        raise ValueError(f"dictionary rows ({D.m}) != signal rows ({X.m})")
    resid = D.matrix @ code - X.matrix
    if X.mask is not None:
        resid = np.where(X.mask, resid, 0.0)
    data = 0.5 * _fsum_columns(np.einsum("ij,ij->j", resid, resid))
    total = data
    if spec.lambda2 != 0:
        total += spec.lambda2 * group_regularizer(
            code, D.partition, spec.collaborative, spec.group_size_scaling
        )
    if spec.lambda1 != 0:
        total += spec.lambda1 * _fsum_columns(np.abs(code).sum(axis=0))
    return total
