"""Synthetic drifting Gaussian streams and CSV stream ingestion.

Every generator emits classes in strict round-robin order (0, 1, ..., C-1, 0,
...), so each window of at least C samples contains every class.  The class
mean used for sample ``t`` is evaluated at that global sample index.
"""

from dataclasses import asdict, dataclass, replace
from enum import Enum
from pathlib import Path

import numpy as np

__all__ = [
    "DriftKind",
    "DriftSpec",
    "CsvFormatError",
    "gen_translating",
    "gen_rotating",
    "gen_random_walk",
    "generate",
    "translating_means",
    "rotating_means",
    "random_walk_means",
    "load_csv_stream",
    "ANALOG_STREAMS",
]


class DriftKind(str, Enum):
    TRANSLATE = "translate"
    ROTATE = "rotate"
    RANDOM_WALK = "random_walk"


@dataclass(frozen=True)
class DriftSpec:
    """Parameters of a synthetic stream.

    ``drift_rate`` is a displacement per emitted sample for translation and
    random walks, and an angle in radians per sample for rotation.
    ``bound`` is the half-width of the reflecting box for random walks
    (defaults to ``class_separation * classes``).
    """

    kind: DriftKind = DriftKind.TRANSLATE
    classes: int = 2
    dimension: int = 2
    samples: int = 16000
    class_separation: float = 5.0
    drift_rate: float = 0.0
    noise_sigma: float = 0.5
    seed: int = 0
    bound: float = None

    def __post_init__(self):
        object.__setattr__(self, "kind", DriftKind(self.kind))
        if self.classes < 2:
            raise ValueError("a drift stream needs at least 2 classes")
        if self.dimension < 1:
            raise ValueError("dimension must be >= 1")
        if self.kind is DriftKind.ROTATE and self.dimension < 2:
            raise ValueError("rotation needs dimension >= 2")
        if self.samples < self.classes:
            raise ValueError("samples must be >= classes")
        if not self.noise_sigma > 0:
            raise ValueError("noise_sigma must be positive")
        if self.bound is not None and not self.bound > 0:
            raise ValueError("bound must be positive")

    def with_seed(self, seed):
        return replace(self, seed=seed)

    def to_dict(self):
        d = asdict(self)
        d["kind"] = self.kind.value
        return d


def _labels(spec):
    return np.arange(spec.samples) % spec.classes


def _emit(spec, means, rng):
    y = _labels(spec)
    X = means + rng.normal(0.0, spec.noise_sigma, size=means.shape)
    return X, y


def _require(spec, kind):
    if spec.kind is not kind:
        raise ValueError(f"expected a {kind.value} spec, got {spec.kind.value}")


def translating_means(spec, t):
    """Class means at sample indices ``t``: shape ``(len(t), classes, D)``.

    Class 0 stays at the origin; the other classes start at multiples of the
    separation along the first axis and move along the main diagonal.
    """
    t = np.asarray(t, dtype=float)
    direction = np.ones(spec.dimension) / np.sqrt(spec.dimension)
    start = np.zeros((spec.classes, spec.dimension))
    start[:, 0] = spec.class_separation * np.arange(spec.classes)
    moving = (np.arange(spec.classes) > 0).astype(float)
    return (start[None, :, :]
            + (t[:, None, None] * spec.drift_rate) * moving[None, :, None] * direction)


def rotating_means(spec, t):
    """Means on a circle of radius ``class_separation``, shape ``(len(t), classes, D)``."""
    t = np.asarray(t, dtype=float)
    theta = (2 * np.pi * np.arange(spec.classes) / spec.classes)[None, :] + spec.drift_rate * t[:, None]
    means = np.zeros((len(t), spec.classes, spec.dimension))
    means[:, :, 0] = spec.class_separation * np.cos(theta)
    means[:, :, 1] = spec.class_separation * np.sin(theta)
    return means


def gen_translating(spec):
    """Stationary class 0 plus diagonally translating other classes."""
    _require(spec, DriftKind.TRANSLATE)
    rng = np.random.default_rng(spec.seed)
    t = np.arange(spec.samples)
    y = _labels(spec)
    means = translating_means(spec, t)[t, y]
    return _emit(spec, means, rng)


def gen_rotating(spec):
    """Classes rotating about the origin; periodic in ``2*pi/drift_rate`` samples."""
    _require(spec, DriftKind.ROTATE)
    rng = np.random.default_rng(spec.seed)
    t = np.arange(spec.samples)
    y = _labels(spec)
    means = rotating_means(spec, t)[t, y]
    return _emit(spec, means, rng)


def _reflect(x, bound):
    # Fold an unconstrained path into [-bound, bound] with mirror reflections.
    period = 4 * bound
    y = np.mod(x + bound, period)
    return np.where(y > 2 * bound, period - y, y) - bound


def gen_random_walk(spec):
    """Class means do independent reflected Gaussian random walks.

    Every class mean takes one ``N(0, drift_rate**2 I)`` step per emitted
    sample.  Returns ``(X, y)``; the mean paths themselves are available from
    :func:`random_walk_means`.
    """
    _require(spec, DriftKind.RANDOM_WALK)
    rng = np.random.default_rng(spec.seed)
    means = random_walk_means(spec, rng)
    y = _labels(spec)
    return _emit(spec, means[np.arange(spec.samples), y], rng)


def random_walk_means(spec, rng=None):
    """Mean path of every class, shape ``(samples, classes, D)``."""
    if rng is None:
        rng = np.random.default_rng(spec.seed)
    bound = spec.bound if spec.bound is not None else spec.class_separation * spec.classes
    start = np.zeros((spec.classes, spec.dimension))
    start[:, 0] = spec.class_separation * (np.arange(spec.classes) - (spec.classes - 1) / 2)
    steps = rng.normal(0.0, spec.drift_rate, size=(spec.samples, spec.classes, spec.dimension))
    steps[0] = 0.0
    return _reflect(start[None] + np.cumsum(steps, axis=0), bound)


_GENERATORS = {
    DriftKind.TRANSLATE: gen_translating,
    DriftKind.ROTATE: gen_rotating,
    DriftKind.RANDOM_WALK: gen_random_walk,
}


def generate(spec):
    """Dispatch on ``spec.kind``; returns ``(X, y)``."""
    return _GENERATORS[spec.kind](spec)


class CsvFormatError(ValueError):
    """A malformed CSV stream file.  ``line`` is 1-based, ``column`` 0-based."""

    def __init__(self, message, line=None, column=None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if column is not None:
            where.append(f"column {column}")
        super().__init__(f"{', '.join(where)}: {message}" if where else message)
        self.line = line
        self.column = column


def load_csv_stream(path, label_column=-1, header=False):
    """Read a comma-separated stream file.

    Features are parsed as floats in column order with the label column
    removed; labels are kept as strings.  Quoting is not supported.

    Returns
    -------
    X : ndarray of shape (n_samples, n_features)
    y : ndarray of str, shape (n_samples,)
    labels : list of str
        Distinct labels in order of first appearance.
    """
    rows, labels = [], []
    width = None
    col = None
    with open(Path(path), encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            if header and lineno == 1:
                continue
            line = raw.rstrip("\r\n")
            if not line.strip():
                continue
            cells = line.split(",")
            if width is None:
                width = len(cells)
                if width < 2:
                    raise CsvFormatError("need at least one feature and a label", lineno)
                col = label_column if label_column >= 0 else width + label_column
                if not 0 <= col < width:
                    raise CsvFormatError(
                        f"label column {label_column} out of range for {width} columns", lineno
                    )
            elif len(cells) != width:
                raise CsvFormatError(f"expected {width} cells, found {len(cells)}", lineno)
            feats = []
            for j, cell in enumerate(cells):
                if j == col:
                    continue
                try:
                    value = float(cell)
                except ValueError:
                    raise CsvFormatError(f"non-numeric feature {cell.strip()!r}", lineno, j) from None
                if not np.isfinite(value):
                    raise CsvFormatError(f"non-finite feature {cell.strip()!r}", lineno, j)
                feats.append(value)
            label = cells[col].strip()
            if not label:
                raise CsvFormatError("empty label", lineno, col)
            rows.append(feats)
            labels.append(label)
    if not rows:
        raise CsvFormatError("no data rows")
    y = np.array(labels, dtype=object)
    return np.asarray(rows, dtype=float), y, list(dict.fromkeys(labels))


# Parameterised analogs of the benchmark archive streams.  Noise is small
# relative to the class separation and drift per window stays well under one
# default radius for window sizes up to 500.
ANALOG_STREAMS = {
    "1cdt": DriftSpec(DriftKind.TRANSLATE, classes=2, dimension=2, samples=16000,
                      class_separation=5.0, drift_rate=5e-4, noise_sigma=0.25),
    "4cr": DriftSpec(DriftKind.ROTATE, classes=4, dimension=2, samples=48000,
                     class_separation=3.0, drift_rate=2 * np.pi / 48000, noise_sigma=0.25),
    "ug_2c_2d": DriftSpec(DriftKind.RANDOM_WALK, classes=2, dimension=2, samples=16000,
                          class_separation=5.0, drift_rate=5e-3, noise_sigma=0.25),
    "ug_2c_3d": DriftSpec(DriftKind.RANDOM_WALK, classes=2, dimension=3, samples=16000,
                          class_separation=5.0, drift_rate=5e-3, noise_sigma=0.25),
    "ug_2c_5d": DriftSpec(DriftKind.RANDOM_WALK, classes=2, dimension=5, samples=16000,
                          class_separation=5.0, drift_rate=5e-3, noise_sigma=0.25),
}
