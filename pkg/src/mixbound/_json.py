import math


def num(x):
    """JSON-safe number: infinities become the string "inf" / "-inf"."""
    if x is None:
        return None
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if math.isnan(x):
        raise ValueError("NaN is not a valid output value")
    return x


def from_num(x):
    if isinstance(x, str):
        return float(x)
    return None if x is None else float(x)


def opt_num(x):
    """Like num, but a missing value (NaN) becomes null."""
    if x is not None and math.isnan(float(x)):
        return None
    return num(x)


def from_opt_num(x):
    return math.nan if x is None else from_num(x)
