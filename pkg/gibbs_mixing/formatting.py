"""Deterministic number rendering for reports and CSV files."""

import math

SIGNIFICANT_DIGITS = 12
FIXED_RANGE = (1e-3, 1e6)


def format_number(value, digits: int = SIGNIFICANT_DIGITS) -> str:
    """Fixed notation for |x| in [1e-3, 1e6), scientific otherwise."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    value = float(value)
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    if value == 0.0:
        return "0"
    magnitude = abs(value)
    low, high = FIXED_RANGE
    if low <= magnitude < high:
        exponent = math.floor(math.log10(magnitude))
        decimals = max(0, digits - 1 - exponent)
        text = f"{value:.{decimals}f}"
        # Rounding may carry into a new leading digit (9.99..96 -> 10.0..0).
        if len(text.lstrip("-").replace(".", "").lstrip("0")) > digits and decimals > 0:
            text = f"{value:.{decimals - 1}f}"
        return text
    return f"{value:.{digits - 1}e}"


def format_items(items) -> str:
    return "\n".join(f"{key}={format_number(value) if not isinstance(value, str) else value}" for key, value in items)
