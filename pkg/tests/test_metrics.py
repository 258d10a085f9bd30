import time

import numpy as np
import pytest
from scipy import stats

from evlpop.metrics import (
    confusion_counts,
    macro_f1,
    macro_f1_codes,
    timed,
    wilcoxon_signed_rank,
)
from oracles import avg_ranks, confusion_f1, wilcoxon_enumerate


# ---------------------------------------------------------------- macro-F1


def test_all_correct_is_one():
    assert macro_f1(["A", "B", "A"], ["A", "B", "A"], ["A", "B"]) == 1.0


def test_one_mistake_matches_hand_count():
    truth, pred = ["A", "A", "B", "B"], ["A", "B", "B", "B"]
    # A: P=1, R=1/2, F1=2/3.  B: P=2/3, R=1, F1=4/5.
    hand = (2 / 3 + 4 / 5) / 2
    assert confusion_f1(truth, pred, ["A", "B"]) == pytest.approx(hand)
    assert macro_f1(truth, pred, ["A", "B"]) == pytest.approx(hand, abs=1e-12)
    assert round(hand, 4) == 0.7333


def test_everything_unrecognised_scores_zero():
    assert macro_f1(["A", "B"], [None, None], ["A", "B"]) == 0.0


def test_unrecognised_is_false_negative_only():
    counts = confusion_counts(["A", "A", "B"], ["A", None, "B"], ["A", "B"])
    assert counts.tp.tolist() == [1, 1]
    assert counts.fp.tolist() == [0, 0]
    assert counts.fn.tolist() == [1, 0]


def test_absent_class_is_left_out_of_the_mean():
    assert macro_f1(["A", "A"], ["A", "A"], ["A", "B", "C"]) == 1.0


def test_predicted_but_absent_class_counts_as_zero():
    # B has no truths but one prediction: F1_B = 0 joins the mean.
    assert macro_f1(["A", "A"], ["A", "B"], ["A", "B"]) == pytest.approx((2 / 3 + 0) / 2)


def test_unknown_truth_label_rejected():
    with pytest.raises(ValueError, match="index 1"):
        macro_f1(["A", "Z"], ["A", "A"], ["A", "B"])
    with pytest.raises(ValueError):
        macro_f1(["A"], ["A", "A"], ["A"])


def test_macro_f1_matches_confusion_matrix_oracle():
    rng = np.random.default_rng(3)
    for _ in range(1000):
        k = int(rng.integers(1, 5))
        labels = [f"L{i}" for i in range(k)]
        n = int(rng.integers(1, 40))
        truth = [labels[i] for i in rng.integers(0, k, size=n)]
        pred = [labels[i] if i < k else None for i in rng.integers(0, k + 1, size=n)]
        assert macro_f1(truth, pred, labels) == pytest.approx(
            confusion_f1(truth, pred, labels), abs=1e-12)


def test_codes_and_labels_agree(rng):
    truth = rng.integers(0, 3, size=100)
    pred = rng.integers(-1, 3, size=100)
    named = macro_f1([str(t) for t in truth], [None if p < 0 else str(p) for p in pred],
                     ["0", "1", "2"])
    assert macro_f1_codes(truth, pred, 3) == pytest.approx(named, abs=1e-15)


def test_invariant_under_relabelling(rng):
    for _ in range(100):
        truth = rng.integers(0, 4, size=50)
        pred = rng.integers(-1, 4, size=50)
        perm = rng.permutation(4)
        mapped = np.where(pred >= 0, perm[np.maximum(pred, 0)], -1)
        assert macro_f1_codes(truth, pred, 4) == pytest.approx(
            macro_f1_codes(perm[truth], mapped, 4), abs=1e-12)


# ---------------------------------------------------------------- Wilcoxon


def test_identical_samples_give_p_one():
    r = wilcoxon_signed_rank([0.3, 0.5, 0.7], [0.3, 0.5, 0.7])
    assert (r.p_value, r.n_effective) == (1.0, 0)


def test_five_positive_differences():
    observed, p = wilcoxon_enumerate([1, 2, 3, 4, 5], [0] * 5)
    assert p == 2 / 32
    r = wilcoxon_signed_rank([1, 2, 3, 4, 5], 0)
    assert r.statistic == observed == 0
    assert r.p_value == pytest.approx(0.0625, abs=1e-12)


def test_exact_p_matches_full_enumeration():
    rng = np.random.default_rng(11)
    for _ in range(300):
        n = int(rng.integers(1, 11))
        # Coarse grid to force ties and zeros.
        a = rng.integers(0, 6, size=n) / 4
        b = rng.integers(0, 6, size=n) / 4
        observed, p = wilcoxon_enumerate(a, b)
        r = wilcoxon_signed_rank(a, b)
        assert r.statistic == pytest.approx(observed)
        assert r.p_value == pytest.approx(p, abs=1e-12)


def test_symmetric_in_its_arguments(rng):
    for _ in range(50):
        a, b = rng.random(15), rng.random(15)
        assert wilcoxon_signed_rank(a, b) == wilcoxon_signed_rank(b, a)


def test_normal_path_agrees_with_scipy(rng):
    for _ in range(30):
        n = int(rng.integers(13, 40))
        a, b = rng.random(n), rng.random(n) + 0.1
        ours = wilcoxon_signed_rank(a, b)
        ref = stats.wilcoxon(a, b, method="approx", correction=False)
        assert ours.method == "normal"
        assert ours.statistic == pytest.approx(ref.statistic)
        assert ours.p_value == pytest.approx(ref.pvalue, rel=1e-9)


def test_exact_path_agrees_with_scipy_without_ties(rng):
    for _ in range(30):
        n = int(rng.integers(1, 13))
        a, b = rng.random(n), rng.random(n)
        ref = stats.wilcoxon(a, b, method="exact")
        assert wilcoxon_signed_rank(a, b).p_value == pytest.approx(ref.pvalue, rel=1e-9)


def test_average_ranks_oracle(rng):
    from evlpop.metrics import _average_ranks

    for _ in range(100):
        v = rng.integers(0, 5, size=int(rng.integers(1, 20))).astype(float)
        assert _average_ranks(v).tolist() == avg_ranks(v.tolist())


def test_twenty_consistent_wins_are_significant():
    a = np.linspace(0.9, 0.99, 20)
    r = wilcoxon_signed_rank(a, a - 0.2)
    assert r.significant()


def test_wilcoxon_rejects_bad_input():
    with pytest.raises(ValueError):
        wilcoxon_signed_rank([1, 2], [1, 2, 3])
    with pytest.raises(ValueError):
        wilcoxon_signed_rank([], [])


# ---------------------------------------------------------------- timing


def test_timed_returns_result_and_nonnegative_time():
    result, secs = timed(sum, [1, 2, 3])
    assert result == 6 and secs >= 0


def test_nested_timing_is_consistent():
    def inner():
        time.sleep(0.01)
        return "x"

    (res, inner_secs), outer_secs = timed(timed, inner)
    assert res == "x"
    assert outer_secs >= inner_secs >= 0.0
