"""Tumbling-window evaluation of an evolving ensemble over a labelled stream.

Stream labels only feed the scorer; the model sees the training labels once
and nothing after that.
"""

import hashlib
import json
import time
from dataclasses import dataclass, field, replace

import numpy as np

from ._validation import check_points, check_positive_float, check_positive_int
from .core import Mode
from .estimator import EvolvingEnsembleClassifier
from .evolvers import EvolverConfig
from .metrics import macro_f1_codes

__all__ = ["StreamWindow", "RunConfig", "RunReport", "iter_windows", "run_stream"]


@dataclass(frozen=True)
class StreamWindow:
    index: int
    X: np.ndarray
    y: np.ndarray

    def __len__(self):
        return len(self.X)


def iter_windows(X, y, window_size):
    """Disjoint, ordered windows; only the last one may be short."""
    window_size = check_positive_int(window_size, "window_size")
    for t, start in enumerate(range(0, len(X), window_size)):
        yield StreamWindow(t, X[start:start + window_size], y[start:start + window_size])


@dataclass(frozen=True)
class RunConfig:
    window_size: int = 250
    mode: Mode = Mode.ABSTAIN
    evolver: EvolverConfig = field(default_factory=EvolverConfig)
    seed: int = 0
    n_agents: int = 20
    radius: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "mode", Mode(self.mode))
        check_positive_int(self.window_size, "window_size")
        check_positive_int(self.n_agents, "n_agents")
        check_positive_float(self.radius, "radius")

    def with_seed(self, seed):
        return replace(self, seed=seed)

    def make_estimator(self):
        ev = self.evolver
        return EvolvingEnsembleClassifier(
            n_agents=self.n_agents,
            radius=self.radius,
            evolver=ev.kind.value,
            mode=self.mode.value,
            ga_mutation_prob=ev.ga_mutation_prob,
            ga_mutation_sigma=ev.ga_mutation_sigma,
            ga_selection=ev.ga_selection,
            ga_elitism=ev.ga_elitism,
            pso_inertia=ev.pso_inertia,
            pso_cognitive=ev.pso_cognitive,
            pso_social=ev.pso_social,
            pso_vmax=ev.pso_vmax,
            pso_memory_decay=ev.pso_memory_decay,
            pso_reset_fitness=ev.pso_reset_fitness,
            random_state=self.seed,
        )

    def to_dict(self):
        return dict(
            window_size=self.window_size,
            mode=self.mode.value,
            evolver=self.evolver.to_dict(),
            seed=self.seed,
            n_agents=self.n_agents,
            radius=self.radius,
        )

    @classmethod
    def from_dict(cls, d):
        d = dict(d)
        if isinstance(d.get("evolver"), dict):
            d["evolver"] = EvolverConfig(**d["evolver"])
        return cls(**d)


@dataclass
class RunReport:
    """Outcome of one run.

    ``wall_time_seconds`` is the only field that is not reproducible from the
    seed; :meth:`fingerprint` covers everything else.
    """

    per_window_f1: list
    mean_f1: float
    wall_time_seconds: float
    windows: int
    config: dict
    seed: int
    warnings: list = field(default_factory=list)
    window_sizes: list = field(default_factory=list)
    predictions_sha256: str = ""

    def to_dict(self):
        return dict(
            per_window_f1=list(self.per_window_f1),
            mean_f1=self.mean_f1,
            wall_time_seconds=self.wall_time_seconds,
            windows=self.windows,
            config=self.config,
            seed=self.seed,
            warnings=list(self.warnings),
            window_sizes=list(self.window_sizes),
            predictions_sha256=self.predictions_sha256,
        )

    @classmethod
    def from_dict(cls, d):
        return cls(**d)

    def fingerprint(self):
        d = self.to_dict()
        d.pop("wall_time_seconds")
        return json.dumps(d, sort_keys=True)


def _check_stream(X_train, y_train, X_stream, y_stream):
    X_train = check_points(X_train, name="X_train")
    X_stream = check_points(X_stream, dim=X_train.shape[1], name="X_stream")
    y_train = np.asarray(y_train)
    y_stream = np.asarray(y_stream)
    if len(y_train) != len(X_train):
        raise ValueError("X_train and y_train lengths differ")
    if len(y_stream) != len(X_stream):
        raise ValueError("X_stream and y_stream lengths differ")
    return X_train, y_train, X_stream, y_stream


def run_stream(X_train, y_train, X_stream, y_stream, config=None, estimator=None):
    """Train once, then classify/score/evolve/decay window by window.

    Parameters
    ----------
    X_train, y_train : array-like
        The only labelled data the model ever sees.
    X_stream, y_stream : array-like
        The stream; ``y_stream`` is used for scoring only.
    config : RunConfig, optional
    estimator : EvolvingEnsembleClassifier, optional
        Unfitted estimator to use instead of ``config.make_estimator()``.

    Returns
    -------
    RunReport
    """
    config = config or RunConfig()
    X_train, y_train, X_stream, y_stream = _check_stream(X_train, y_train, X_stream, y_stream)
    if len(X_stream) == 0:
        raise ValueError("empty stream")

    est = estimator if estimator is not None else config.make_estimator()
    start = time.perf_counter()
    est.fit(X_train, y_train)
    index = {lab: k for k, lab in enumerate(est.classes_.tolist())}
    truth = np.empty(len(y_stream), dtype=np.intp)
    for i, lab in enumerate(y_stream.tolist()):
        if lab not in index:
            raise ValueError(f"stream label {lab!r} at index {i} was not seen in training")
        truth[i] = index[lab]

    digest = hashlib.sha256()
    scores, sizes = [], []
    for window in iter_windows(X_stream, truth, config.window_size):
        codes, _, _ = est.classify_window(window.X)
        scores.append(macro_f1_codes(window.y, codes, len(index)))
        sizes.append(len(window))
        digest.update(codes.astype(np.int64).tobytes())
        est.evolve()
    elapsed = time.perf_counter() - start

    return RunReport(
        per_window_f1=scores,
        mean_f1=float(np.mean(scores)),
        wall_time_seconds=elapsed,
        windows=len(scores),
        config=config.to_dict(),
        seed=config.seed,
        warnings=list(est.model_.warnings),
        window_sizes=sizes,
        predictions_sha256=digest.hexdigest(),
    )
