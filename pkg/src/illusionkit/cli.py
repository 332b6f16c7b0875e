"""Command-line entry point.

Subcommands: generate, split, eval, fit, simulate, table, serve. A
shared ``--config`` JSON document supplies per-subcommand parameter
blocks; explicit flags override config values, which override defaults.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .dataset import (
    MANIFEST_SCHEMA_VERSION,
    SweepConfig,
    augment_non_illusions,
    build_dataset,
    make_splits,
    manifest_to_csv,
    read_manifest,
    write_manifest,
)
from .errors import ConfigurationError, IllusionKitError
from .metrics import DEFAULT_BINARIZE_THRESHOLD, LossConfig, evaluate_directory
from .psychophysics import (
    aggregate,
    default_comparator_specs,
    fit_psychometric,
    illusory_reduction,
    read_session_log,
    reduction_table,
    reduction_table_csv,
    schedule_session,
    simulate_observer,
    write_session_log,
    SESSION_LOG_VERSION,
)

KNOWN_CONFIG_KEYS = {"seed", "generate", "split", "eval", "fit", "simulate",
                     "table", "serve"}

TASK_ALIASES = {"id": "identification", "identification": "identification",
                "clf": "classification", "classification": "classification",
                "loc": "localization", "localization": "localization"}


def _load_config(path) -> dict:
    if path is None:
        return {}
    with open(path) as fh:
        config = json.load(fh)
    unknown = set(config) - KNOWN_CONFIG_KEYS
    if unknown:
        raise ConfigurationError(f"unknown config keys: {sorted(unknown)}")
    return config


def _pick(args_value, config_block: dict, key: str, default):
    """Flag > config > default."""
    if args_value is not None:
        return args_value
    if key in config_block:
        return config_block[key]
    return default


def cmd_generate(args, config) -> int:
    block = config.get("generate", {})
    seed = _pick(args.seed, block, "seed", config.get("seed", 0))
    preset = _pick(args.preset, block, "preset", "default")
    if preset == "tiny":
        sweep = SweepConfig.tiny(seed=seed)
    elif "sweep" in block:
        sweep = SweepConfig.from_dict(block["sweep"])
        sweep.seed = seed
    else:
        sweep = SweepConfig.default(seed=seed)

    out_dir = Path(args.out)
    families = args.family or None
    entries = build_dataset(sweep, out_dir, families=families)
    augment_to = _pick(args.augment_to, block, "augment_to", None)
    if augment_to is not None:
        entries = augment_non_illusions(entries, target_count=int(augment_to),
                                        seed=seed, root=out_dir, out_dir=out_dir)
        write_manifest(out_dir / "manifest.jsonl", entries,
                       meta={"seed": seed, "target_counts": sweep.target_counts,
                             "augment_to": int(augment_to)})
    manifest_to_csv(entries, out_dir / "manifest.csv")
    print(f"wrote {len(entries)} entries under {out_dir}")
    print(out_dir / "manifest.jsonl")
    return 0


def cmd_split(args, config) -> int:
    block = config.get("split", {})
    seed = _pick(args.seed, block, "seed", config.get("seed", 0))
    task = TASK_ALIASES[args.task]
    _, entries = read_manifest(args.manifest)
    split = make_splits(entries, task, seed=seed)
    out = Path(args.out) if args.out else Path(args.manifest).parent / f"split_{task}.json"
    with open(out, "w") as fh:
        json.dump(split.as_dict(), fh)
    print(f"{task}: {len(split.train_ids)} train / {len(split.test_ids)} test")
    print(out)
    return 0


def cmd_eval(args, config) -> int:
    block = config.get("eval", {})
    threshold = _pick(args.threshold, block, "threshold", DEFAULT_BINARIZE_THRESHOLD)
    alpha = _pick(args.alpha, block, "alpha", 0.4)
    beta = _pick(args.beta, block, "beta", 0.6)
    cfg = LossConfig(alpha=alpha, beta=beta)
    root = Path(args.manifest).parent
    _, entries = read_manifest(args.manifest)
    if args.split:
        with open(args.split) as fh:
            keep = set(json.load(fh)["test_ids"])
        entries = [e for e in entries if e.id in keep]
    for e in entries:
        e.mask_path = str(root / e.mask_path)
    out_prefix = args.out or str(root / "eval_report")
    report = evaluate_directory(args.pred, entries, threshold=threshold, cfg=cfg,
                                out_prefix=out_prefix)
    print(json.dumps(report.as_dict(), indent=2))
    print(f"{out_prefix}.csv")
    print(f"{out_prefix}.json")
    return 0


def _fit_payload(points, comparator_intensity):
    fit = fit_psychometric(points)
    payload = {
        "fit": {"family": fit.family, "pse": fit.pse, "slope_sigma": fit.slope_sigma,
                "log_likelihood": fit.log_likelihood, "n_trials": fit.n_trials,
                "warning": fit.warning},
        "points": [{"d": p.d, "n_trials": p.n_trials,
                    "n_standard_brighter": p.n_standard_brighter} for p in points],
    }
    if fit.warning is None:
        red = illusory_reduction(fit, comparator_intensity)
        payload["reduction"] = {"comparator_intensity": red.comparator_intensity,
                                "reduction": red.reduction,
                                "perceived_intensity": red.perceived_intensity}
    return payload


def cmd_fit(args, config) -> int:
    if args.session == "-":
        import tempfile

        with tempfile.NamedTemporaryFile("w", suffix=".jsonl", delete=False) as fh:
            fh.write(sys.stdin.read())
            path = Path(fh.name)
    else:
        path = Path(args.session)
    try:
        header, pairs = read_session_log(path)
    finally:
        if args.session == "-":
            path.unlink(missing_ok=True)
    if not pairs:
        raise ConfigurationError("session has no recorded trials")
    points = aggregate([result for _, result in pairs])
    comparator_intensity = pairs[0][0].comparator_intensity
    payload = _fit_payload(points, comparator_intensity)
    payload["session"] = {k: header.get(k) for k in
                          ("session_id", "subject_id", "family", "seed", "n_trials")}
    print(json.dumps(payload, indent=2))
    return 0


def cmd_simulate(args, config) -> int:
    block = config.get("simulate", {})
    seed = _pick(args.seed, block, "seed", config.get("seed", 0))
    family = _pick(args.family, block, "family", "sbc")
    schedule = schedule_session(default_comparator_specs(family), args.trials, seed)
    results = simulate_observer(args.reduction, args.sigma, schedule, seed=seed)
    header = {"subject_id": args.subject, "family": family, "seed": seed,
              "n_trials": args.trials, "simulated_reduction": args.reduction,
              "noise_sigma": args.sigma}
    pairs = list(zip(schedule, results))
    if args.out and args.out != "-":
        write_session_log(args.out, header, pairs)
        print(args.out)
    else:
        from .psychophysics import result_to_dict, trial_to_dict

        sys.stdout.write(json.dumps({"type": "session",
                                     "version": SESSION_LOG_VERSION, **header}) + "\n")
        for trial, result in pairs:
            sys.stdout.write(json.dumps({
                "type": "trial", "version": SESSION_LOG_VERSION,
                "trial": trial_to_dict(trial),
                "result": result_to_dict(result)}) + "\n")
    return 0


def cmd_table(args, config) -> int:
    sessions_dir = Path(args.sessions)
    cells = {}
    for path in sorted(sessions_dir.glob("*.jsonl")):
        header, pairs = read_session_log(path)
        if not pairs:
            continue
        points = aggregate([result for _, result in pairs])
        fit = fit_psychometric(points)
        if fit.warning is not None:
            continue
        red = illusory_reduction(fit, pairs[0][0].comparator_intensity)
        cells[(header.get("subject_id", path.stem), header["family"])] = red
    if not cells:
        raise ConfigurationError(f"no fittable sessions under {sessions_dir}")
    table = reduction_table(cells)
    csv_text = reduction_table_csv(table)
    if args.out:
        prefix = Path(args.out)
        prefix.parent.mkdir(parents=True, exist_ok=True)
        with open(prefix.with_suffix(".json"), "w") as fh:
            json.dump(table, fh, indent=2)
        with open(prefix.with_suffix(".csv"), "w") as fh:
            fh.write(csv_text)
        print(prefix.with_suffix(".csv"))
        print(prefix.with_suffix(".json"))
    else:
        sys.stdout.write(csv_text)
    return 0


def cmd_serve(args, config) -> int:
    import uvicorn

    from .server import create_app

    block = config.get("serve", {})
    port = _pick(args.port, block, "port", 8000)
    data = _pick(args.data, block, "data", "./sessions")
    ui = _pick(args.ui, block, "ui", None)
    app = create_app(data, ui_dir=ui)
    uvicorn.run(app, host=args.host, port=int(port))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="illusionkit",
        description="Brightness-illusion corpus generation, evaluation, and 2AFC sessions",
    )
    parser.add_argument("--version", action="version",
                        version=f"illusionkit {__version__} "
                                f"(manifest schema v{MANIFEST_SCHEMA_VERSION}, "
                                f"session log v{SESSION_LOG_VERSION})")
    parser.add_argument("--config", help="shared JSON config file")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="render a stimulus corpus")
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--preset", choices=["default", "tiny"], default=None)
    p.add_argument("--family", action="append",
                   help="restrict to a family (repeatable)")
    p.add_argument("--augment-to", type=int, dest="augment_to",
                   help="top up non-illusions to this count")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("split", help="build train/test splits")
    p.add_argument("--task", required=True, choices=sorted(TASK_ALIASES))
    p.add_argument("--manifest", required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_split)

    p = sub.add_parser("eval", help="score a prediction directory")
    p.add_argument("--pred", required=True)
    p.add_argument("--manifest", required=True)
    p.add_argument("--split", help="split JSON; evaluates its test ids only")
    p.add_argument("--threshold", type=float)
    p.add_argument("--alpha", type=float)
    p.add_argument("--beta", type=float)
    p.add_argument("--out", help="report prefix (.csv/.json)")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("fit", help="fit a psychometric curve to a session log")
    p.add_argument("--session", required=True, help="session JSONL path or '-' for stdin")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("simulate", help="run a simulated observer session")
    p.add_argument("--reduction", type=float, required=True)
    p.add_argument("--sigma", type=float, required=True)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int)
    p.add_argument("--family")
    p.add_argument("--subject", default="sim")
    p.add_argument("--out", help="session log path; '-' or omitted for stdout")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("table", help="reduction table from a session directory")
    p.add_argument("--sessions", required=True)
    p.add_argument("--out", help="output prefix (.csv/.json); default stdout")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("serve", help="run the 2AFC HTTP service")
    p.add_argument("--port", type=int)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--data", help="session log directory")
    p.add_argument("--ui", help="static UI bundle directory")
    p.set_defaults(func=cmd_serve)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = _load_config(args.config)
        return args.func(args, config)
    except IllusionKitError as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}),
              file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(json.dumps({"error": "FileNotFoundError", "message": str(exc)}),
              file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
