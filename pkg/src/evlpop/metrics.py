"""Window scoring and significance testing."""

import math
import time
from dataclasses import dataclass

import numpy as np

__all__ = [
    "ConfusionCounts",
    "TestResult",
    "confusion_counts",
    "macro_f1",
    "wilcoxon_signed_rank",
    "timed",
    "EXACT_WILCOXON_MAX_N",
    "SIGNIFICANCE_LEVEL",
]

EXACT_WILCOXON_MAX_N = 12
SIGNIFICANCE_LEVEL = 0.05


@dataclass(frozen=True)
class ConfusionCounts:
    labels: tuple
    tp: np.ndarray
    fp: np.ndarray
    fn: np.ndarray

    def f1_scores(self):
        """Per-label F1, ``nan`` for labels absent from truths and predictions."""
        tp, fp, fn = (a.astype(float) for a in (self.tp, self.fp, self.fn))
        present = (tp + fp + fn) > 0
        with np.errstate(invalid="ignore", divide="ignore"):
            precision = np.where(tp + fp > 0, tp / (tp + fp), 0.0)
            recall = np.where(tp + fn > 0, tp / (tp + fn), 0.0)
            f1 = np.where(precision + recall > 0,
                          2 * precision * recall / (precision + recall), 0.0)
        return np.where(present, f1, np.nan)


def _encode(labels, y_true, y_pred):
    index = {lab: k for k, lab in enumerate(labels)}
    true = np.empty(len(y_true), dtype=np.intp)
    for i, lab in enumerate(y_true):
        try:
            true[i] = index[lab]
        except KeyError:
            raise ValueError(f"truth label {lab!r} at index {i} is not in labels") from None
    # None and labels outside the set count as "no prediction for any class".
    pred = np.array([index.get(lab, -1) if lab is not None else -1 for lab in y_pred],
                    dtype=np.intp)
    return true, pred


def _counts_from_codes(true, pred, n_labels):
    tp = np.bincount(true[pred == true], minlength=n_labels)
    predicted = np.bincount(pred[pred >= 0], minlength=n_labels)
    actual = np.bincount(true, minlength=n_labels)
    return tp, predicted - tp, actual - tp


def confusion_counts(y_true, y_pred, labels):
    """Per-label TP/FP/FN.  ``None`` predictions are unrecognised points."""
    labels = tuple(labels)
    if len(y_true) != len(y_pred):
        raise ValueError(f"length mismatch: {len(y_true)} truths, {len(y_pred)} predictions")
    true, pred = _encode(labels, y_true, y_pred)
    return ConfusionCounts(labels, *_counts_from_codes(true, pred, len(labels)))


def macro_f1_codes(true, pred, n_labels):
    """Macro-F1 on integer codes; ``pred == -1`` marks an unrecognised point."""
    tp, fp, fn = _counts_from_codes(np.asarray(true), np.asarray(pred), n_labels)
    f1 = ConfusionCounts((), tp, fp, fn).f1_scores()
    present = ~np.isnan(f1)
    return float(f1[present].mean()) if present.any() else 0.0


def macro_f1(y_true, y_pred, labels):
    """Unweighted mean of per-class F1 over the classes present in the window.

    An unrecognised prediction (``None``) is a false negative for its true
    class and a prediction for no class.  Classes with neither truths nor
    predictions are left out of the mean.
    """
    counts = confusion_counts(y_true, y_pred, labels)
    f1 = counts.f1_scores()
    present = ~np.isnan(f1)
    return float(f1[present].mean()) if present.any() else 0.0


@dataclass(frozen=True)
class TestResult:
    statistic: float
    p_value: float
    n_effective: int
    method: str = "exact"

    __test__ = False  # not a pytest class

    def significant(self, alpha=SIGNIFICANCE_LEVEL):
        return self.p_value < alpha

    def to_dict(self):
        return dict(statistic=self.statistic, p_value=self.p_value,
                    n_effective=self.n_effective, method=self.method)


def _average_ranks(values):
    order = np.argsort(values, kind="mergesort")
    ranks = np.empty(len(values))
    sorted_vals = values[order]
    i = 0
    while i < len(values):
        j = i
        while j + 1 < len(values) and sorted_vals[j + 1] == sorted_vals[i]:
            j += 1
        ranks[order[i:j + 1]] = (i + j) / 2 + 1
        i = j + 1
    return ranks


def _exact_p(ranks, w_min):
    # Null distribution of W+ by convolution over doubled (integer) ranks.
    doubled = np.rint(2 * ranks).astype(np.int64)
    total = int(doubled.sum())
    counts = np.zeros(total + 1)
    counts[0] = 1.0
    for r in doubled:
        shifted = np.zeros_like(counts)
        shifted[r:] = counts[:total + 1 - r]
        counts = counts + shifted
    m = int(round(2 * w_min))
    if 2 * m >= total:
        return 1.0
    tail = counts[:m + 1].sum() + counts[total - m:].sum()
    return float(min(1.0, tail / counts.sum()))


def wilcoxon_signed_rank(a, b):
    """Two-sided Wilcoxon signed-rank test on paired samples.

    ``b`` may be a scalar reference value, broadcast against ``a``.  Zero
    differences are dropped and tied ``|d|`` get average ranks.  The statistic
    is ``min(W+, W-)``.  Up to 12 non-zero differences the p-value is exact;
    above that a tie-corrected normal approximation is used.
    """
    a = np.asarray(a, dtype=float).ravel()
    b = np.asarray(b, dtype=float)
    if b.ndim == 0:
        b = np.full_like(a, float(b))
    b = b.ravel()
    if len(a) != len(b):
        raise ValueError(f"length mismatch: {len(a)} vs {len(b)}")
    if len(a) == 0:
        raise ValueError("need at least one pair")

    d = a - b
    d = d[d != 0]
    n = len(d)
    if n == 0:
        return TestResult(0.0, 1.0, 0, "exact")
    ranks = _average_ranks(np.abs(d))
    w_plus = float(ranks[d > 0].sum())
    w_minus = float(ranks[d < 0].sum())
    w = min(w_plus, w_minus)

    if n <= EXACT_WILCOXON_MAX_N:
        return TestResult(w, _exact_p(ranks, w), n, "exact")

    _, tie_sizes = np.unique(np.abs(d), return_counts=True)
    var = n * (n + 1) * (2 * n + 1) / 24 - np.sum(tie_sizes ** 3 - tie_sizes) / 48
    if var <= 0:
        return TestResult(w, 1.0, n, "normal")
    z = (w - n * (n + 1) / 4) / math.sqrt(var)
    p = math.erfc(abs(z) / math.sqrt(2))
    return TestResult(w, float(min(1.0, p)), n, "normal")


def timed(fn, *args, **kwargs):
    """Call ``fn`` and return ``(result, wall_seconds)`` from a monotonic clock."""
    start = time.perf_counter()
    result = fn(*args, **kwargs)
    return result, time.perf_counter() - start
