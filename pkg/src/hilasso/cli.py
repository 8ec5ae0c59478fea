"""Command-line interface binding the library modules for batch use.

Five subcommands: ``solve`` codes signals against a dictionary, ``generate``
draws a synthetic instance, ``coherence`` reports dictionary coherence
measures, ``certify`` evaluates recovery certificates, and ``experiment``
runs the synthetic benchmark. Every run writes a manifest (inputs, outputs,
resolved parameters, tool version, wall time) next to its primary output;
data outputs themselves are bit-reproducible for a fixed seed.

Exit codes: 0 on success, 1 on usage or input errors, 2 when a solve stops
at its iteration limit without converging.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import asdict, dataclass, replace
from pathlib import Path

import numpy as np

from . import __version__, analysis, harness, io
from .model import MODES, Dictionary, GroupPartition, RegularizerSpec, SignalSet
from .solver import SolverConfig, sparsa_solve

__all__ = ["main", "RunManifest"]

EXIT_OK = 0
EXIT_INPUT_ERROR = 1
EXIT_NOT_CONVERGED = 2


@dataclass(frozen=True)
class RunManifest:
    """Provenance record serialized next to every command output."""

    command: str
    inputs: dict
    outputs: dict
    parameters: dict
    tool_version: str
    wall_time_s: float


def _write_manifest(path: Path, command: str, inputs: dict, outputs: dict,
                    parameters: dict, started: float) -> None:
    manifest = RunManifest(
        command=command,
        inputs=inputs,
        outputs=outputs,
        parameters=parameters,
        tool_version=__version__,
        wall_time_s=time.perf_counter() - started,
    )
    io.write_report(path, asdict(manifest))


def _parse_uniform_groups(text: str) -> tuple[int, int]:
    try:
        q_str, g_str = text.lower().split("x")
        q, g = int(q_str), int(g_str)
    except ValueError as exc:
        raise ValueError(f"--uniform-groups expects QxG (e.g. 8x64), got {text!r}") from exc
    if q < 1 or g < 1:
        raise ValueError("--uniform-groups sizes must be positive")
    return q, g


def _load_partition(args, p: int, require_groups: bool) -> GroupPartition:
    if args.groups and args.uniform_groups:
        raise ValueError("pass either --groups or --uniform-groups, not both")
    if args.groups:
        return io.read_groups_file(args.groups, p=p)
    if args.uniform_groups:
        q, g = _parse_uniform_groups(args.uniform_groups)
        if q * g != p:
            raise ValueError(f"--uniform-groups {q}x{g} does not cover {p} atoms")
        return GroupPartition.uniform(q, g)
    if require_groups:
        raise ValueError("this mode needs a group partition: pass --groups or --uniform-groups")
    return GroupPartition.singletons(p)


def cmd_solve(args) -> int:
    started = time.perf_counter()
    dict_mat = io.read_matrix_csv(args.dict)
    signals = io.read_matrix_csv(args.signals)
    mode = args.mode
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}; expected one of {sorted(MODES)}")
    grouped = mode != "lasso"
    partition = _load_partition(args, dict_mat.shape[1], require_groups=grouped)
    D = Dictionary(dict_mat, partition)
    mask = io.read_mask_csv(args.mask) if args.mask else None
    X = SignalSet(signals, mask)
    spec = RegularizerSpec.for_mode(mode, args.lambda1, args.lambda2)
    solver_cfg = SolverConfig(
        max_outer_iters=args.max_iters,
        rel_tol=args.tol,
    )
    result = sparsa_solve(D, X, spec, config=solver_cfg)

    code_text = io.matrix_csv_text(result.code.matrix)
    outputs = {}
    if args.out:
        Path(args.out).write_text(code_text)
        outputs["code"] = args.out
    else:
        sys.stdout.write(code_text)
    if args.trace:
        io.write_matrix_csv(args.trace, np.asarray(result.objective_trace)[:, None])
        outputs["trace"] = args.trace
    if args.out:
        _write_manifest(
            Path(args.out + ".manifest.json"), "solve",
            inputs={"dict": args.dict, "signals": args.signals,
                    "groups": args.groups, "mask": args.mask},
            outputs=outputs,
            parameters={"mode": mode, "lambda1": spec.lambda1, "lambda2": spec.lambda2,
                        "max_iters": args.max_iters, "tol": args.tol,
                        "converged": result.converged,
                        "outer_iterations": result.outer_iterations},
            started=started,
        )
    if not result.converged:
        print("warning: iteration limit reached before convergence", file=sys.stderr)
        return EXIT_NOT_CONVERGED
    return EXIT_OK


def cmd_generate(args) -> int:
    started = time.perf_counter()
    config = harness.ExperimentConfig(
        q=args.q, g=args.g, m=args.m, k=args.k, s=args.s, n=args.n,
        sigma=args.sigma, missing_fraction=args.missing_fraction, seed=args.seed,
    )
    D, X, A, support = harness.generate_synthetic(config)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    io.write_matrix_csv(out / "dictionary.csv", D.matrix)
    io.write_matrix_csv(out / "signals.csv", X.matrix)
    io.write_matrix_csv(out / "code.csv", A.matrix)
    io.write_groups_file(out / "groups.txt", D.partition)
    io.write_support_file(out / "support.json", support)
    outputs = {name: str(out / f"{name}.csv") for name in ("dictionary", "signals", "code")}
    outputs["groups"] = str(out / "groups.txt")
    outputs["support"] = str(out / "support.json")
    if X.mask is not None:
        io.write_mask_csv(out / "mask.csv", X.mask)
        outputs["mask"] = str(out / "mask.csv")
    _write_manifest(
        out / "manifest.json", "generate",
        inputs={}, outputs=outputs,
        parameters={"q": args.q, "g": args.g, "m": args.m, "k": args.k, "s": args.s,
                    "n": args.n, "sigma": args.sigma,
                    "missing_fraction": args.missing_fraction, "seed": args.seed},
        started=started,
    )
    return EXIT_OK


def _report_out(payload: dict, out: str | None, command: str, inputs: dict,
                parameters: dict, started: float) -> None:
    text = io.report_text(payload)
    if out:
        Path(out).write_text(text)
        _write_manifest(Path(out + ".manifest.json"), command,
                        inputs=inputs, outputs={"report": out},
                        parameters=parameters, started=started)
    else:
        sys.stdout.write(text)


def cmd_coherence(args) -> int:
    started = time.perf_counter()
    dict_mat = io.read_matrix_csv(args.dict)
    partition = _load_partition(args, dict_mat.shape[1], require_groups=True)
    D = Dictionary(dict_mat, partition)
    report = analysis.coherence_report(D, args.s, cap=args.cap)
    payload = {
        "measures": asdict(report),
        "dictionary": {"m": D.m, "p": D.p, "q": partition.q,
                       "g": partition.uniform_size},
        "parameters": {"s": args.s, "cap": args.cap},
    }
    _report_out(payload, args.out, "coherence",
                inputs={"dict": args.dict, "groups": args.groups},
                parameters=payload["parameters"], started=started)
    return EXIT_OK


def _certificate_payload(cert: analysis.RecoveryCertificate) -> dict:
    # Strict JSON has no Infinity literal; non-finite values (pure group
    # mode, non-positive denominators) become an explicit sentinel.
    payload = asdict(cert)
    for key, value in payload.items():
        if isinstance(value, float) and not np.isfinite(value):
            payload[key] = "unbounded"
    payload["holds"] = cert.holds
    return payload


def cmd_certify(args) -> int:
    started = time.perf_counter()
    dict_mat = io.read_matrix_csv(args.dict)
    partition = _load_partition(args, dict_mat.shape[1], require_groups=True)
    D = Dictionary(dict_mat, partition)
    parameters = {"k": args.k, "s": args.s, "lambda": args.lam, "cap": args.cap}
    if args.support:
        support = io.read_support_file(args.support)
        cert = analysis.instance_conditions(D, support, args.lam, alpha=args.alpha)
        payload = {
            "certificate": _certificate_payload(cert),
            "support": io.read_report(args.support),
            "parameters": {**parameters, "alpha": args.alpha},
        }
    else:
        if args.k is None or args.s is None:
            raise ValueError("uniform mode needs --k and --s")
        report = analysis.coherence_report(D, args.s, cap=args.cap)
        proj = analysis.projected_coherences(D, args.k, args.s, cap=args.cap)
        cert = analysis.theorem2_check(
            report, proj, args.k, args.s, partition.uniform_size, args.lam
        )
        payload = {
            "certificate": _certificate_payload(cert),
            "measures": asdict(report),
            "projected_measures": asdict(proj),
            "parameters": parameters,
        }
    _report_out(payload, args.out, "certify",
                inputs={"dict": args.dict, "groups": args.groups,
                        "support": args.support},
                parameters=payload["parameters"], started=started)
    return EXIT_OK


_CONFIG_KEYS = frozenset((
    "q", "g", "m", "k", "s", "n", "sigma", "missing_fraction", "seed",
    "methods", "lambda_grid", "support_epsilon", "scale_lambda2_by_sqrt_n",
))


def _experiment_config(args) -> harness.ExperimentConfig:
    base = harness.full_scale_config() if args.full_scale else harness.ExperimentConfig()
    overrides: dict = {}
    if args.config:
        raw = io.read_report(args.config)
        unknown = set(raw) - _CONFIG_KEYS
        if unknown:
            raise ValueError(f"unknown experiment config keys: {sorted(unknown)}")
        if "lambda_grid" in raw:
            raw["lambda_grid"] = {
                m: tuple(tuple(pair) for pair in grid)
                for m, grid in raw["lambda_grid"].items()
            }
        if "methods" in raw:
            raw["methods"] = tuple(raw["methods"])
        overrides.update(raw)
    for name in ("q", "g", "m", "k", "s", "n", "sigma", "seed"):
        value = getattr(args, name)
        if value is not None:
            overrides[name] = value
    if args.missing_fraction is not None:
        overrides["missing_fraction"] = args.missing_fraction
    if args.methods is not None:
        overrides["methods"] = tuple(args.methods.split(","))
    return replace(base, **overrides)


def _config_payload(config: harness.ExperimentConfig) -> dict:
    payload = asdict(config)
    payload["methods"] = list(config.methods)
    payload["lambda_grid"] = {
        m: [list(pair) for pair in config.grid_for(m)] for m in config.methods
    }
    return payload


def cmd_experiment(args) -> int:
    started = time.perf_counter()
    config = _experiment_config(args)
    active_sets: dict[str, np.ndarray] = {}
    if args.missing_demo:
        result, active_sets = harness.run_missing_data_demo(config)
    else:
        result = harness.run_experiment(config)
    metrics = {}
    for method, mres in result.per_method.items():
        entry = asdict(mres)
        del entry["runtime"]  # kept out of the report for bit-reproducibility
        metrics[method] = entry
    payload = {"config": _config_payload(result.config), "metrics": metrics}
    outputs = {}
    if args.active_sets:
        out_dir = Path(args.active_sets)
        out_dir.mkdir(parents=True, exist_ok=True)
        for method, sets in active_sets.items():
            path = out_dir / f"{method}_active_set.csv"
            io.write_mask_csv(path, sets)
            outputs[f"active_set_{method}"] = str(path)
    _report_out(payload, args.out, "experiment",
                inputs={"config": args.config},
                parameters=payload["config"], started=started)
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hilasso",
        description="Hierarchical and collaborative sparse coding toolkit",
    )
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("--threads", type=int, default=0,
                        help="cap the linear-algebra thread pool (0 = auto)")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_group_flags(p):
        p.add_argument("--groups", help="group partition file (one group per line, 1-based)")
        p.add_argument("--uniform-groups", help="uniform partition shortcut, QxG")

    p_solve = sub.add_parser("solve", help="code signals against a dictionary")
    p_solve.add_argument("--dict", required=True, help="dictionary CSV (m x p)")
    p_solve.add_argument("--signals", required=True, help="signals CSV (m x n)")
    add_group_flags(p_solve)
    p_solve.add_argument("--mode", required=True, help="regularization model: "
                         + "|".join(sorted(MODES)))
    p_solve.add_argument("--lambda1", type=float, default=0.0)
    p_solve.add_argument("--lambda2", type=float, default=0.0)
    p_solve.add_argument("--mask", help="0/1 observation mask CSV (m x n)")
    p_solve.add_argument("--max-iters", type=int, default=5000)
    p_solve.add_argument("--tol", type=float, default=1e-6)
    p_solve.add_argument("--out", help="output code CSV (stdout when omitted)")
    p_solve.add_argument("--trace", help="objective trace CSV output")
    p_solve.set_defaults(func=cmd_solve)

    p_gen = sub.add_parser("generate", help="draw a synthetic instance")
    for name, default in (("q", 8), ("g", 32), ("m", 64), ("k", 2), ("s", 8), ("n", 50)):
        p_gen.add_argument(f"--{name}", type=int, default=default)
    p_gen.add_argument("--sigma", type=float, default=0.0)
    p_gen.add_argument("--missing-fraction", type=float, default=0.0)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--out-dir", required=True)
    p_gen.set_defaults(func=cmd_generate)

    p_coh = sub.add_parser("coherence", help="dictionary coherence report")
    p_coh.add_argument("--dict", required=True)
    add_group_flags(p_coh)
    p_coh.add_argument("--s", type=int, default=1, help="in-group sparsity")
    p_coh.add_argument("--cap", type=int, default=analysis.DEFAULT_ENUM_CAP)
    p_coh.add_argument("--out")
    p_coh.set_defaults(func=cmd_coherence)

    p_cert = sub.add_parser("certify", help="evaluate recovery certificates")
    p_cert.add_argument("--dict", required=True)
    add_group_flags(p_cert)
    p_cert.add_argument("--k", type=int, help="group sparsity (uniform mode)")
    p_cert.add_argument("--s", type=int, help="in-group sparsity (uniform mode)")
    p_cert.add_argument("--lambda", dest="lam", type=float, required=True)
    p_cert.add_argument("--alpha", type=float, help="explicit alpha (instance mode)")
    p_cert.add_argument("--support", help="support JSON for instance mode")
    p_cert.add_argument("--cap", type=int, default=analysis.DEFAULT_ENUM_CAP)
    p_cert.add_argument("--out")
    p_cert.set_defaults(func=cmd_certify)

    p_exp = sub.add_parser("experiment", help="synthetic benchmark")
    p_exp.add_argument("--config", help="JSON experiment config")
    for name in ("q", "g", "m", "k", "s", "n"):
        p_exp.add_argument(f"--{name}", type=int)
    p_exp.add_argument("--sigma", type=float)
    p_exp.add_argument("--missing-fraction", type=float)
    p_exp.add_argument("--seed", type=int)
    p_exp.add_argument("--methods", help="comma-separated method list")
    p_exp.add_argument("--full-scale", action="store_true",
                       help="start from the full-size configuration")
    p_exp.add_argument("--missing-demo", action="store_true",
                       help="run the masked-data lasso vs. collaborative comparison")
    p_exp.add_argument("--active-sets", metavar="DIR",
                       help="write per-method binary active-set matrices here")
    p_exp.add_argument("--out")
    p_exp.set_defaults(func=cmd_experiment)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits with 2 on usage errors; fold that into the stable
        # contract (1 = usage/input error, 2 = non-convergence).
        return EXIT_OK if exc.code == 0 else EXIT_INPUT_ERROR
    try:
        if args.threads > 0:
            from threadpoolctl import threadpool_limits

            with threadpool_limits(limits=args.threads):
                return args.func(args)
        return args.func(args)
    except (ValueError, OSError, json.JSONDecodeError,
            analysis.EnumerationCapError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
