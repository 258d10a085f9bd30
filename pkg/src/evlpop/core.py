"""Micro-classifier ensembles: domain types, classification and initialisation.

A micro-classifier is a labelled hypersphere ``[centre, radius, label, fitness]``.
Each class owns one fixed-size ensemble of them; the collection of ensembles is
the :class:`Model`.  Classification has side effects on fitness, which is what
the evolvers later use as selection pressure.
"""

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from ._validation import (
    check_point,
    check_points,
    check_positive_float,
    check_positive_int,
    sorted_labels,
)

__all__ = [
    "Mode",
    "MicroClassifier",
    "Ensemble",
    "Model",
    "Prediction",
    "classify",
    "classify_window",
    "initialize_model",
    "pad_subpopulation",
    "decay_fitness",
]


class Mode(str, Enum):
    """What to do with a point no classifier recognises."""

    ABSTAIN = "abstain"
    FORCE = "force"


def _as_mode(mode):
    try:
        return Mode(mode)
    except ValueError:
        raise ValueError(f"mode must be 'abstain' or 'force', got {mode!r}") from None


@dataclass(frozen=True)
class MicroClassifier:
    """Read-only snapshot of one ensemble member."""

    centre: np.ndarray
    radius: float
    label: object
    fitness: float = 0.0

    def distance(self, p):
        return float(np.sqrt(np.sum((self.centre - np.asarray(p, dtype=float)) ** 2)))

    def recognises(self, p):
        return self.distance(p) <= self.radius


class Ensemble:
    """Same-label subpopulation stored column-wise.

    Centres are mutable (evolvers move them); radii and the label are fixed at
    construction and the radii array is write-protected.
    """

    def __init__(self, label, centres, radii, fitness=None):
        centres = np.array(centres, dtype=np.float64, ndmin=2)
        if centres.ndim != 2:
            raise ValueError(f"centres must be 2-D, got shape {centres.shape}")
        n = centres.shape[0]
        radii = np.broadcast_to(np.asarray(radii, dtype=np.float64), (n,)).copy()
        if np.any(radii <= 0):
            raise ValueError("micro-classifier radii must be positive")
        radii.setflags(write=False)
        if fitness is None:
            fitness = np.zeros(n)
        fitness = np.array(fitness, dtype=np.float64).reshape(n)
        if np.any(fitness < 0):
            raise ValueError("fitness must be non-negative")
        self._label = label
        self.centres = centres
        self._radii = radii
        self.fitness = fitness

    @property
    def label(self):
        return self._label

    @property
    def radii(self):
        return self._radii

    @property
    def dim(self):
        return self.centres.shape[1]

    def __len__(self):
        return self.centres.shape[0]

    def __getitem__(self, i):
        return MicroClassifier(
            self.centres[i].copy(), float(self._radii[i]), self._label, float(self.fitness[i])
        )

    def __iter__(self):
        return (self[i] for i in range(len(self)))

    def __repr__(self):
        return f"Ensemble(label={self._label!r}, size={len(self)}, dim={self.dim})"

    def copy(self):
        return Ensemble(self._label, self.centres.copy(), self._radii, self.fitness.copy())

    def append(self, centre, radius, fitness=0.0):
        """Return a new ensemble with one extra member (radii stay immutable)."""
        centres = np.vstack([self.centres, np.asarray(centre, dtype=np.float64)[None, :]])
        radii = np.append(self._radii, radius)
        return Ensemble(self._label, centres, radii, np.append(self.fitness, fitness))

    def with_centres(self, centres, fitness=None):
        """Same label and radii, new centres; fitness kept unless given."""
        return Ensemble(
            self._label, centres, self._radii,
            self.fitness.copy() if fitness is None else fitness,
        )

    def state_bytes(self):
        return self.centres.tobytes() + self._radii.tobytes() + self.fitness.tobytes()


@dataclass(frozen=True)
class Prediction:
    """Outcome of classifying one point.

    ``label`` is ``None`` when the point was left unrecognised (abstain mode).
    ``confidence`` is the distance to the winning centre, so smaller is better.
    """

    label: object
    confidence: float
    recognisers: int
    recognised: bool

    @property
    def is_unrecognised(self):
        return self.label is None and not self.recognised


@dataclass
class Model:
    ensembles: list
    n_agents: int
    radius: float
    warnings: list = field(default_factory=list)
    distance_evaluations: int = 0

    def __post_init__(self):
        if not self.ensembles:
            raise ValueError("a model needs at least one ensemble")
        labels = [e.label for e in self.ensembles]
        if len(set(labels)) != len(labels):
            raise ValueError("ensemble labels must be distinct")
        order = sorted_labels(labels)
        self.ensembles = sorted(self.ensembles, key=lambda e: order.index(e.label))
        dims = {e.dim for e in self.ensembles}
        if len(dims) != 1:
            raise ValueError("all ensembles must share one dimension")

    @property
    def labels(self):
        return [e.label for e in self.ensembles]

    @property
    def dim(self):
        return self.ensembles[0].dim

    @property
    def n_classifiers(self):
        return sum(len(e) for e in self.ensembles)

    def ensemble(self, label):
        for e in self.ensembles:
            if e.label == label:
                return e
        raise KeyError(label)

    def copy(self):
        return Model(
            [e.copy() for e in self.ensembles], self.n_agents, self.radius,
            list(self.warnings), self.distance_evaluations,
        )

    def state_bytes(self):
        return b"".join(e.state_bytes() for e in self.ensembles)

    def _stacked(self):
        centres = np.vstack([e.centres for e in self.ensembles])
        radii = np.concatenate([e.radii for e in self.ensembles])
        owner = np.concatenate(
            [np.full(len(e), k, dtype=np.intp) for k, e in enumerate(self.ensembles)]
        )
        return centres, radii, owner

    def _scatter_fitness(self, fitness):
        start = 0
        for e in self.ensembles:
            stop = start + len(e)
            e.fitness[:] = fitness[start:stop]
            start = stop


def classify(model, p, mode=Mode.ABSTAIN):
    """Classify one point and apply the fitness side effects.

    Every recognising classifier gains one unit of fitness.  When the
    recognisers disagree on the label, all of them drop to zero fitness, but the
    nearest recogniser's label is still returned.  Ties on distance go to the
    earlier classifier in (label order, insertion order).
    """
    mode = _as_mode(mode)
    p = check_point(p, model.dim)
    centres, radii, owner = model._stacked()
    dist = np.sqrt(np.sum((centres - p) ** 2, axis=1))
    model.distance_evaluations += len(dist)

    hit = dist <= radii
    if not hit.any():
        if mode is Mode.ABSTAIN:
            return Prediction(None, float("inf"), 0, False)
        j = int(np.argmin(dist))
        return Prediction(model.ensembles[owner[j]].label, float(dist[j]), 0, False)

    fitness = np.concatenate([e.fitness for e in model.ensembles])
    fitness[hit] += 1
    if len(np.unique(owner[hit])) > 1:
        fitness[hit] = 0
    model._scatter_fitness(fitness)

    j = int(np.argmin(np.where(hit, dist, np.inf)))
    return Prediction(model.ensembles[owner[j]].label, float(dist[j]), int(hit.sum()), True)


def classify_window(model, X, mode=Mode.ABSTAIN):
    """Classify a batch of points in arrival order.

    Gives the same predictions and the same final fitness as calling
    :func:`classify` on each row in turn, but computes the distances in one
    pass.

    Returns
    -------
    label_index : ndarray of int, shape (n_samples,)
        Index into ``model.labels``; ``-1`` marks an unrecognised point.
    confidence : ndarray of float, shape (n_samples,)
        Distance to the winning centre (``inf`` when unrecognised).
    recognisers : ndarray of int, shape (n_samples,)
    """
    mode = _as_mode(mode)
    X = check_points(X, dim=model.dim)
    centres, radii, owner = model._stacked()
    n, m = X.shape[0], centres.shape[0]
    dist = np.sqrt(np.sum((X[:, None, :] - centres[None, :, :]) ** 2, axis=2))
    model.distance_evaluations += n * m

    hit = dist <= radii[None, :]
    n_hit = hit.sum(axis=1)
    recognised = n_hit > 0
    masked = np.where(hit, dist, np.inf)
    winner = np.argmin(masked, axis=1)
    if mode is Mode.FORCE:
        winner = np.where(recognised, winner, np.argmin(dist, axis=1))
    rows = np.arange(n)
    label_index = owner[winner]
    confidence = dist[rows, winner]
    if mode is Mode.ABSTAIN:
        label_index = np.where(recognised, label_index, -1)
        confidence = np.where(recognised, confidence, np.inf)

    # Sequential fitness replay: a classifier ends the window with its old
    # fitness (or 0 after any conflict) plus the recognitions after its last
    # conflicting point.
    n_labels = len(model.ensembles)
    labels_hit = np.zeros((n, n_labels), dtype=bool)
    for k in range(n_labels):
        labels_hit[:, k] = hit[:, owner == k].any(axis=1)
    conflict = labels_hit.sum(axis=1) > 1
    last_conflict = np.where(hit & conflict[:, None], rows[:, None], -1).max(axis=0)
    cum = np.cumsum(hit, axis=0)
    total = cum[-1] if n else np.zeros(m, dtype=np.intp)
    upto = np.where(last_conflict >= 0, cum[np.maximum(last_conflict, 0), np.arange(m)], 0)
    fitness = np.concatenate([e.fitness for e in model.ensembles])
    fitness = np.where(last_conflict >= 0, 0.0, fitness) + (total - upto)
    model._scatter_fitness(fitness)

    return label_index, confidence, n_hit


def pad_subpopulation(ensemble, k, radius, rng):
    """Grow ``ensemble`` by ``k`` perturbed copies of its existing centres.

    Centres are sampled without replacement from the original members; once
    those run out a fresh sampling round starts.  Each copy gets one uniformly
    chosen coordinate redrawn from ``N(old, radius**2)``.
    """
    k = check_positive_int(k, "k")
    radius = check_positive_float(radius, "radius")
    if len(ensemble) == 0:
        raise ValueError("cannot pad an empty ensemble")
    source = ensemble.centres.copy()
    new = []
    order = []
    for _ in range(k):
        if not order:
            order = list(rng.permutation(len(source)))
        centre = source[order.pop(0)].copy()
        d = int(rng.integers(centre.shape[0]))
        centre[d] = rng.normal(centre[d], radius)
        new.append(centre)
    centres = np.vstack([ensemble.centres, np.asarray(new)])
    radii = np.concatenate([ensemble.radii, np.full(k, radius)])
    fitness = np.concatenate([ensemble.fitness, np.zeros(k)])
    return Ensemble(ensemble.label, centres, radii, fitness)


def initialize_model(X, y, n_agents, radius, rng):
    """Build one ensemble per class from labelled training data.

    Points are consumed in the given order.  A point creates a new classifier
    only when no existing member of its class recognises it and the ensemble is
    still below ``n_agents``; a refused point records a warning that the radius
    is probably too small.  Short ensembles are padded up to ``n_agents``.
    """
    n_agents = check_positive_int(n_agents, "n_agents")
    radius = check_positive_float(radius, "radius")
    X = check_points(X)
    y = np.asarray(y, dtype=object)
    if y.ndim != 1 or len(y) != len(X):
        raise ValueError("y must be 1-D with one label per row of X")

    ensembles = []
    warnings = []
    for label in sorted_labels(y.tolist()):
        points = X[y == label]
        centres = [points[0]]
        refused = 0
        for p in points[1:]:
            c = np.asarray(centres)
            if np.any(np.sqrt(np.sum((c - p) ** 2, axis=1)) <= radius):
                continue
            if len(centres) < n_agents:
                centres.append(p)
            else:
                refused += 1
        ens = Ensemble(label, np.asarray(centres), radius)
        if refused:
            warnings.append(
                f"class {label!r}: agent cap {n_agents} reached with {refused} "
                f"training points left uncovered; radius {radius} is likely too small"
            )
        if len(ens) < n_agents:
            ens = pad_subpopulation(ens, n_agents - len(ens), radius, rng)
        ensembles.append(ens)
    return Model(ensembles, n_agents, radius, warnings)


def decay_fitness(model):
    """Linear fitness decay, floored at zero."""
    for e in model.ensembles:
        np.maximum(e.fitness - 1.0, 0.0, out=e.fitness)
    return model
