"""File formats shared by the command-line tools and the harness.

Matrices travel as headerless CSV, row-major, printed with 17 significant
digits so that every IEEE double round-trips exactly. Group partitions are
text files with one group per line as space-separated 1-based atom indices.
Masks are 0/1 CSV matrices of the same shape as the signals. Reports,
configs and support files use JSON with sorted keys.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .analysis import SupportSpec
from .model import GroupPartition

__all__ = [
    "write_matrix_csv",
    "read_matrix_csv",
    "matrix_csv_text",
    "write_groups_file",
    "read_groups_file",
    "write_mask_csv",
    "read_mask_csv",
    "write_report",
    "read_report",
    "write_support_file",
    "read_support_file",
]


def matrix_csv_text(matrix: np.ndarray) -> str:
    arr = np.atleast_2d(np.asarray(matrix, dtype=float))
    return "\n".join(",".join("%.17g" % v for v in row) for row in arr) + "\n"


def write_matrix_csv(path: str | Path, matrix: np.ndarray) -> None:
    Path(path).write_text(matrix_csv_text(matrix))


def read_matrix_csv(path: str | Path) -> np.ndarray:
    arr = np.loadtxt(path, delimiter=",", dtype=float, ndmin=2)
    if arr.size == 0:
        raise ValueError(f"{path}: empty matrix file")
    return arr


def write_groups_file(path: str | Path, partition: GroupPartition) -> None:
    lines = [" ".join(str(int(i) + 1) for i in g) for g in partition.groups]
    Path(path).write_text("\n".join(lines) + "\n")


def read_groups_file(path: str | Path, p: int | None = None) -> GroupPartition:
    """Parse a one-group-per-line file of 1-based atom indices."""
    groups = []
    for ln, line in enumerate(Path(path).read_text().splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        try:
            idx = [int(tok) - 1 for tok in line.split()]
        except ValueError as exc:
            raise ValueError(f"{path}:{ln}: group indices must be integers") from exc
        groups.append(idx)
    if not groups:
        raise ValueError(f"{path}: no groups found")
    total = p if p is not None else sum(len(g) for g in groups)
    return GroupPartition(tuple(np.asarray(g) for g in groups), total)


def write_mask_csv(path: str | Path, mask: np.ndarray) -> None:
    arr = np.asarray(mask, dtype=bool).astype(int)
    text = "\n".join(",".join(str(v) for v in row) for row in arr) + "\n"
    Path(path).write_text(text)


def read_mask_csv(path: str | Path) -> np.ndarray:
    arr = np.loadtxt(path, delimiter=",", dtype=float, ndmin=2)
    if not np.all((arr == 0) | (arr == 1)):
        raise ValueError(f"{path}: mask entries must be 0 or 1")
    return arr.astype(bool)


def write_report(path: str | Path, payload: dict) -> None:
    Path(path).write_text(report_text(payload))


def report_text(payload: dict) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def read_report(path: str | Path) -> dict:
    return json.loads(Path(path).read_text())


def write_support_file(path: str | Path, support: SupportSpec) -> None:
    payload = {
        "active_groups": [r + 1 for r in support.active_groups],
        "within_group_supports": [
            [i + 1 for i in sup] for sup in support.within_group_supports
        ],
    }
    write_report(path, payload)


def read_support_file(path: str | Path) -> SupportSpec:
    """Parse a JSON support file with 1-based group and in-group indices."""
    payload = read_report(path)
    try:
        active = tuple(int(r) - 1 for r in payload["active_groups"])
        within = tuple(
            tuple(int(i) - 1 for i in sup) for sup in payload["within_group_supports"]
        )
    except (KeyError, TypeError) as exc:
        raise ValueError(
            f"{path}: expected keys 'active_groups' and 'within_group_supports'"
        ) from exc
    return SupportSpec(active, within)
