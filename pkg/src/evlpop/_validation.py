"""Input validation helpers shared by the estimator and the stream runner."""

import numbers

import numpy as np
from sklearn.utils.validation import check_array


def check_points(X, *, dim=None, name="X"):
    """Return ``X`` as a finite 2-D float array, optionally checking its width."""
    X = check_array(X, dtype=np.float64, ensure_all_finite=True, input_name=name)
    if dim is not None and X.shape[1] != dim:
        raise ValueError(
            f"{name} has {X.shape[1]} features, expected {dim}"
        )
    return X


def check_point(p, dim):
    p = np.asarray(p, dtype=np.float64)
    if p.ndim != 1:
        raise ValueError(f"expected a 1-D point, got shape {p.shape}")
    if p.shape[0] != dim:
        raise ValueError(f"point has dimension {p.shape[0]}, expected {dim}")
    if not np.all(np.isfinite(p)):
        raise ValueError("point contains NaN or infinity")
    return p


def check_positive_int(value, name):
    if isinstance(value, bool) or not isinstance(value, numbers.Integral) or value < 1:
        raise ValueError(f"{name} must be a positive integer, got {value!r}")
    return int(value)


def check_positive_float(value, name):
    if isinstance(value, bool) or not isinstance(value, numbers.Real):
        raise ValueError(f"{name} must be a positive real, got {value!r}")
    value = float(value)
    if not np.isfinite(value) or value <= 0:
        raise ValueError(f"{name} must be a positive real, got {value!r}")
    return value


def check_probability(value, name):
    value = float(value)
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"{name} must lie in [0, 1], got {value!r}")
    return value


def sorted_labels(labels):
    """Distinct labels in a deterministic order (natural order when comparable)."""
    labels = list(dict.fromkeys(labels))
    try:
        return sorted(labels)
    except TypeError:
        return sorted(labels, key=lambda lab: (type(lab).__name__, str(lab)))


def make_seed_sequence(random_state):
    """Turn an int, ``None`` or ``SeedSequence`` into a ``SeedSequence``."""
    if isinstance(random_state, np.random.SeedSequence):
        return random_state
    if random_state is None or isinstance(random_state, numbers.Integral):
        return np.random.SeedSequence(random_state)
    if isinstance(random_state, np.random.Generator):
        return np.random.SeedSequence(int(random_state.integers(2**63)))
    raise ValueError(f"cannot build a seed from {random_state!r}")
