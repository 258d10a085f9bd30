"""Repeated runs, agent-count sweeps and evolver comparisons.

Run ``i`` of a batch uses seed ``seed + i`` for both the synthetic stream and
the model, so any single run can be reproduced on its own with
:func:`run_single`.
"""

import csv
import itertools
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .datagen import ANALOG_STREAMS, DriftSpec, generate, load_csv_stream
from .evolvers import EvolverConfig, EvolverKind
from .metrics import TestResult, wilcoxon_signed_rank
from .stream import RunConfig, RunReport, run_stream

__all__ = [
    "SCHEMA_VERSION",
    "ExperimentSpec",
    "Section",
    "Comparison",
    "BatchReport",
    "load_data",
    "run_single",
    "run_experiment",
    "emit_report",
    "load_report",
]

SCHEMA_VERSION = "1.0"
STD_CONVENTION = "population std (ddof=0) over per-run mean macro-F1"


@dataclass(frozen=True)
class ExperimentSpec:
    """One experiment: a stream source, a run configuration and a protocol.

    Exactly one of ``stream`` (a generator spec) and ``csv_path`` is set.  The
    first ``train_size`` samples are the labelled training set and the rest is
    the stream.
    """

    stream: DriftSpec = None
    csv_path: str = None
    csv_label_column: int = -1
    csv_header: bool = False
    train_size: int = 500
    run: RunConfig = field(default_factory=RunConfig)
    repetitions: int = 20
    sweep: tuple = None
    baselines: tuple = None
    reference_f1: float = None
    output: str = None
    output_format: str = "json"
    jobs: int = 1

    def __post_init__(self):
        if (self.stream is None) == (self.csv_path is None):
            raise ValueError("give exactly one of a generator stream or a csv path")
        if self.repetitions < 1:
            raise ValueError("repetitions must be >= 1")
        if self.train_size < 1:
            raise ValueError("train_size must be >= 1")
        if self.sweep is not None:
            object.__setattr__(self, "sweep", tuple(int(a) for a in self.sweep))
            if not self.sweep or any(a < 1 for a in self.sweep):
                raise ValueError("sweep values must be positive")
        if self.baselines is not None:
            object.__setattr__(
                self, "baselines", tuple(EvolverKind(b).value for b in self.baselines)
            )
        if self.output_format not in ("json", "csv"):
            raise ValueError("output_format must be 'json' or 'csv'")
        if self.jobs < 1:
            raise ValueError("jobs must be >= 1")

    def to_dict(self):
        return dict(
            stream=None if self.stream is None else self.stream.to_dict(),
            csv_path=self.csv_path,
            csv_label_column=self.csv_label_column,
            csv_header=self.csv_header,
            train_size=self.train_size,
            run=self.run.to_dict(),
            repetitions=self.repetitions,
            sweep=None if self.sweep is None else list(self.sweep),
            baselines=None if self.baselines is None else list(self.baselines),
            reference_f1=self.reference_f1,
            output=self.output,
            output_format=self.output_format,
            jobs=self.jobs,
        )

    @classmethod
    def from_dict(cls, d):
        d = dict(d)
        stream = d.get("stream")
        if isinstance(stream, str):
            d["stream"] = ANALOG_STREAMS[stream.lower()]
        elif isinstance(stream, dict):
            d["stream"] = DriftSpec(**stream)
        if isinstance(d.get("run"), dict):
            d["run"] = RunConfig.from_dict(d["run"])
        return cls(**d)


@dataclass
class Section:
    """All repetitions for one (evolver, agents-per-class) setting."""

    evolver: str
    n_agents: int
    runs: list

    @property
    def mean_f1s(self):
        return np.array([r.mean_f1 for r in self.runs])

    @property
    def mean_f1(self):
        return float(self.mean_f1s.mean())

    @property
    def std_f1(self):
        return float(self.mean_f1s.std())

    @property
    def mean_wall_time(self):
        return float(np.mean([r.wall_time_seconds for r in self.runs]))

    def window_series(self):
        """Per-window mean and std of F1 across runs (truncated to the shortest run)."""
        n = min(len(r.per_window_f1) for r in self.runs)
        f1 = np.array([r.per_window_f1[:n] for r in self.runs])
        return f1.mean(axis=0), f1.std(axis=0)

    def to_dict(self):
        mean, std = self.window_series()
        return dict(
            evolver=self.evolver,
            n_agents=self.n_agents,
            mean_f1=self.mean_f1,
            std_f1=self.std_f1,
            mean_wall_time=self.mean_wall_time,
            window_mean_f1=mean.tolist(),
            window_std_f1=std.tolist(),
            runs=[r.to_dict() for r in self.runs],
        )

    @classmethod
    def from_dict(cls, d):
        return cls(d["evolver"], d["n_agents"], [RunReport.from_dict(r) for r in d["runs"]])


@dataclass
class Comparison:
    """Wilcoxon test between two sections, or a section and a constant."""

    a: str
    b: str
    n_agents: int
    result: TestResult

    def to_dict(self):
        return dict(a=self.a, b=self.b, n_agents=self.n_agents, result=self.result.to_dict())

    @classmethod
    def from_dict(cls, d):
        return cls(d["a"], d["b"], d["n_agents"], TestResult(**d["result"]))


@dataclass
class BatchReport:
    spec: dict
    sections: list
    comparisons: list = field(default_factory=list)

    def section(self, evolver, n_agents=None):
        for s in self.sections:
            if s.evolver == evolver and (n_agents is None or s.n_agents == n_agents):
                return s
        raise KeyError((evolver, n_agents))

    @property
    def runs(self):
        return [r for s in self.sections for r in s.runs]

    def to_dict(self):
        return dict(
            schema_version=SCHEMA_VERSION,
            std_convention=STD_CONVENTION,
            spec=self.spec,
            sections=[s.to_dict() for s in self.sections],
            comparisons=[c.to_dict() for c in self.comparisons],
        )

    @classmethod
    def from_dict(cls, d):
        if d.get("schema_version") != SCHEMA_VERSION:
            raise ValueError(f"unsupported report schema {d.get('schema_version')!r}")
        return cls(
            d["spec"],
            [Section.from_dict(s) for s in d["sections"]],
            [Comparison.from_dict(c) for c in d["comparisons"]],
        )


def load_data(spec, seed):
    """``(X_train, y_train, X_stream, y_stream)`` for the run with ``seed``."""
    if spec.stream is not None:
        X, y = generate(spec.stream.with_seed(seed))
    else:
        X, y, _ = load_csv_stream(spec.csv_path, spec.csv_label_column, spec.csv_header)
    n = spec.train_size
    if n >= len(X):
        raise ValueError(f"train_size {n} leaves no stream (only {len(X)} samples)")
    return X[:n], y[:n], X[n:], y[n:]


def _run_config(spec, seed, evolver=None, n_agents=None):
    run = spec.run
    if evolver is not None:
        run = replace(run, evolver=replace(run.evolver, kind=EvolverKind(evolver)))
    if n_agents is not None:
        run = replace(run, n_agents=n_agents)
    return run.with_seed(seed)


def run_single(spec, seed, evolver=None, n_agents=None, data=None):
    """One run of ``spec`` with the given seed (and optional overrides)."""
    if data is None:
        data = load_data(spec, seed)
    return run_stream(*data, _run_config(spec, seed, evolver, n_agents))


def _task(args):
    spec, seed, evolver, n_agents, index = args
    try:
        return run_single(spec, seed, evolver, n_agents)
    except Exception as exc:
        # Keep the exception type so callers can tell data errors from bugs.
        exc.args = (f"run {index} (seed {seed}, {evolver}, {n_agents} agents): {exc}",)
        raise


def run_experiment(spec):
    """Execute every repetition of every (agents, evolver) setting.

    Returns
    -------
    BatchReport
        One section per (agents, evolver) pair in sweep order, with pairwise
        Wilcoxon comparisons between evolvers at equal agent counts and, if
        ``spec.reference_f1`` is set, a comparison of every section against it.
    """
    evolvers = list(spec.baselines) if spec.baselines else [spec.run.evolver.kind.value]
    agents = list(spec.sweep) if spec.sweep else [spec.run.n_agents]
    base = spec.run.seed
    settings = [(a, e) for a in agents for e in evolvers]
    tasks = [
        (spec, base + i, e, a, i)
        for a, e in settings
        for i in range(spec.repetitions)
    ]
    if spec.jobs > 1:
        with ProcessPoolExecutor(max_workers=spec.jobs) as pool:
            reports = list(pool.map(_task, tasks))
    else:
        reports = [_task(t) for t in tasks]

    sections = []
    for k, (a, e) in enumerate(settings):
        runs = reports[k * spec.repetitions:(k + 1) * spec.repetitions]
        sections.append(Section(e, a, runs))

    comparisons = []
    for a in agents:
        group = [s for s in sections if s.n_agents == a]
        for s, t in itertools.combinations(group, 2):
            comparisons.append(
                Comparison(s.evolver, t.evolver, a, wilcoxon_signed_rank(s.mean_f1s, t.mean_f1s))
            )
        if spec.reference_f1 is not None:
            for s in group:
                comparisons.append(Comparison(
                    s.evolver, f"reference={spec.reference_f1}", a,
                    wilcoxon_signed_rank(s.mean_f1s, spec.reference_f1),
                ))
    return BatchReport(spec.to_dict(), sections, comparisons)


def _csv_paths(path):
    path = Path(path)
    stem = path.with_suffix("") if path.suffix == ".csv" else path
    return Path(f"{stem}_runs.csv"), Path(f"{stem}_windows.csv")


def emit_report(report, fmt, path):
    """Write ``report`` as JSON, or as a pair of CSV files.

    Returns the list of written paths.  CSV output is ``<stem>_runs.csv``
    (one row per run) and ``<stem>_windows.csv`` (per-window mean F1 across
    runs, for plotting).
    """
    if fmt == "json":
        path = Path(path)
        path.write_text(json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n",
                        encoding="utf-8")
        return [path]
    if fmt != "csv":
        raise ValueError(f"unknown report format {fmt!r}")

    runs_path, windows_path = _csv_paths(path)
    with open(runs_path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["evolver", "n_agents", "run", "seed", "mean_f1", "wall_time_seconds"])
        for s in report.sections:
            for i, r in enumerate(s.runs):
                w.writerow([s.evolver, s.n_agents, i, r.seed, repr(r.mean_f1),
                            repr(r.wall_time_seconds)])
    with open(windows_path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["evolver", "n_agents", "window_index", "mean_f1", "std"])
        for s in report.sections:
            mean, std = s.window_series()
            for t, (m, sd) in enumerate(zip(mean, std)):
                w.writerow([s.evolver, s.n_agents, t, repr(float(m)), repr(float(sd))])
    return [runs_path, windows_path]


def load_report(path):
    return BatchReport.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))
