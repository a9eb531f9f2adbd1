"""Argument checks used by the estimators and the CLI."""

import numbers

SEED_MIN = -(2 ** 63)
SEED_MAX = 2 ** 64 - 1


def check_seed(seed):
    """Accept any integer that fits a signed or unsigned 64-bit word."""
    if isinstance(seed, bool) or not isinstance(seed, numbers.Integral):
        raise TypeError(f"seed must be an integer, got {type(seed).__name__}")
    if not SEED_MIN <= seed <= SEED_MAX:
        raise ValueError(f"seed {seed} does not fit in 64 bits")
    return int(seed)


def check_positive_int(value, name):
    if isinstance(value, bool) or not isinstance(value, numbers.Integral):
        raise TypeError(f"{name} must be an integer, got {type(value).__name__}")
    if value < 1:
        raise ValueError(f"{name} must be positive, got {value}")
    return int(value)


def check_choice(value, choices, name):
    if value not in choices:
        raise ValueError(f"{name} must be one of {sorted(map(str, choices))}, got {value!r}")
    return value


def check_sequence(X, name="X"):
    """Materialize an iterable of samples, rejecting strings and mappings."""
    if isinstance(X, (str, bytes, dict)):
        raise TypeError(f"{name} must be a sequence of samples, not {type(X).__name__}")
    try:
        X = list(X)
    except TypeError:
        raise TypeError(f"{name} must be iterable") from None
    return X
