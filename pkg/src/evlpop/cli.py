"""Command-line experiment driver.

Exit codes: 0 success, 1 configuration error, 2 data error, 3 runtime failure.
"""

import argparse
import json
import logging
import sys
from dataclasses import replace
from pathlib import Path

import yaml

from .datagen import ANALOG_STREAMS, CsvFormatError, DriftSpec
from .experiment import ExperimentSpec, emit_report, run_experiment
from .reference import PEER_F1, reference_value
from .stream import RunConfig

log = logging.getLogger("evlpop")

EXIT_OK, EXIT_CONFIG, EXIT_DATA, EXIT_RUNTIME = 0, 1, 2, 3


class ConfigError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def _int_list(text):
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _reference(text):
    """A float, or ``DATASET:METHOD`` looked up in ``reference.PEER_F1``."""
    try:
        return float(text)
    except ValueError:
        pass
    dataset, _, method = text.partition(":")
    try:
        return reference_value(dataset, method)
    except KeyError:
        raise argparse.ArgumentTypeError(
            f"unknown reference {text!r}; datasets: {', '.join(PEER_F1)}"
        )


def build_parser():
    p = _Parser(
        prog="evlpop",
        description="Run evolving micro-classifier ensembles over drifting streams.",
    )
    p.add_argument("config", nargs="?", help="YAML/JSON experiment file; flags override it")
    src = p.add_argument_group("stream source")
    src.add_argument("--stream", help=f"generator: one of {', '.join(ANALOG_STREAMS)}, "
                     "or translate/rotate/random_walk")
    src.add_argument("--csv", help="CSV stream file (label column last by default)")
    src.add_argument("--label-column", type=int)
    src.add_argument("--header", action="store_true", default=None)
    src.add_argument("--samples", type=int)
    src.add_argument("--classes", type=int)
    src.add_argument("--dimension", type=int)
    src.add_argument("--drift-rate", type=float)
    src.add_argument("--noise", type=float)
    src.add_argument("--separation", type=float)
    src.add_argument("--train-size", type=int)

    run = p.add_argument_group("model")
    run.add_argument("--window", type=int)
    run.add_argument("--agents", type=int)
    run.add_argument("--radius", type=float)
    run.add_argument("--evolver", choices=["ga", "pso", "static"])
    run.add_argument("--mode", choices=["abstain", "force"])
    run.add_argument("--seed", type=int)

    proto = p.add_argument_group("protocol")
    proto.add_argument("--reps", type=int)
    proto.add_argument("--sweep", type=_int_list, help="agents per class, e.g. 10,20,50,100")
    proto.add_argument("--baselines", type=lambda s: [v.strip() for v in s.split(",")],
                       help="evolvers to compare on identical streams, e.g. static,ga")
    proto.add_argument("--reference", type=_reference,
                       help="constant F1 (or DATASET:METHOD) to test every section against")
    proto.add_argument("--jobs", type=int)

    out = p.add_argument_group("output")
    out.add_argument("--out", help="report path (stdout summary only if omitted)")
    out.add_argument("--format", choices=["json", "csv"])
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def _load_config(path):
    try:
        data = yaml.safe_load(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}")
    except yaml.YAMLError as exc:
        raise ConfigError(f"invalid config {path}: {exc}")
    if not isinstance(data, dict):
        raise ConfigError(f"config {path} must be a mapping")
    return data


def spec_from_args(args):
    """Merge an optional config file with command-line overrides."""
    try:
        spec = ExperimentSpec.from_dict(_load_config(args.config)) if args.config else None
    except (TypeError, ValueError, KeyError) as exc:
        raise ConfigError(f"invalid config: {exc}")

    stream = spec.stream if spec else None
    csv_path = spec.csv_path if spec else None
    if args.csv is not None:
        csv_path, stream = args.csv, None
    if args.stream is not None:
        name = args.stream.lower()
        if name in ANALOG_STREAMS:
            stream = ANALOG_STREAMS[name]
        else:
            try:
                stream = DriftSpec(kind=name)
            except ValueError as exc:
                raise ConfigError(str(exc))
        csv_path = None
    if stream is None and csv_path is None:
        stream = ANALOG_STREAMS["1cdt"]

    try:
        if stream is not None:
            overrides = {
                "samples": args.samples, "classes": args.classes, "dimension": args.dimension,
                "drift_rate": args.drift_rate, "noise_sigma": args.noise,
                "class_separation": args.separation,
            }
            stream = replace(stream, **{k: v for k, v in overrides.items() if v is not None})

        run = spec.run if spec else RunConfig()
        evolver = run.evolver
        if args.evolver is not None:
            evolver = replace(evolver, kind=args.evolver)
        run_overrides = {
            "window_size": args.window, "n_agents": args.agents, "radius": args.radius,
            "mode": args.mode, "seed": args.seed,
        }
        run = replace(run, evolver=evolver,
                      **{k: v for k, v in run_overrides.items() if v is not None})

        base = spec.to_dict() if spec else {}
        fields = {
            "csv_label_column": args.label_column, "csv_header": args.header,
            "train_size": args.train_size, "repetitions": args.reps, "sweep": args.sweep,
            "baselines": args.baselines, "reference_f1": args.reference,
            "output": args.out, "output_format": args.format, "jobs": args.jobs,
        }
        base.update({k: v for k, v in fields.items() if v is not None})
        base.update(stream=stream, csv_path=csv_path, run=run)
        return ExperimentSpec.from_dict(base)
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc))


def _summary(report):
    lines = []
    for s in report.sections:
        lines.append(
            f"{s.evolver:>6} agents={s.n_agents:<4d} F1={s.mean_f1:.3f}({s.std_f1:.3f}) "
            f"time={s.mean_wall_time:.3f}s runs={len(s.runs)}"
        )
    for c in report.comparisons:
        r = c.result
        flag = "significant" if r.significant() else "n.s."
        lines.append(f"  {c.a} vs {c.b} (agents={c.n_agents}): W={r.statistic:g} "
                     f"p={r.p_value:.4g} {flag}")
    return "\n".join(lines)


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                            format="%(levelname)s %(message)s")
        spec = spec_from_args(args)
    except ConfigError as exc:
        print(f"evlpop: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    if spec.csv_path is not None and not Path(spec.csv_path).is_file():
        print(f"evlpop: data error: no such file {spec.csv_path}", file=sys.stderr)
        return EXIT_DATA
    try:
        log.info("running %s", json.dumps(spec.to_dict(), sort_keys=True))
        report = run_experiment(spec)
    except (CsvFormatError, OSError) as exc:
        print(f"evlpop: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ValueError as exc:
        # Stream/label validation failures surface as ValueError from the runner.
        print(f"evlpop: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except Exception as exc:  # noqa: BLE001
        print(f"evlpop: runtime failure: {exc}", file=sys.stderr)
        return EXIT_RUNTIME

    for run in report.runs:
        for w in run.warnings:
            log.warning("seed %d: %s", run.seed, w)
    print(_summary(report))
    if spec.output:
        try:
            paths = emit_report(report, spec.output_format, spec.output)
        except OSError as exc:
            print(f"evlpop: runtime failure writing report: {exc}", file=sys.stderr)
            return EXIT_RUNTIME
        for path in paths:
            print(f"wrote {path}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
