"""Helpers for loading preset driven configuration and flat key=value files."""

from copy import deepcopy
import importlib
from typing import Any, Dict, List, Optional

DEFAULT_ACTIVE_PRESET = "configs.config_runtime_default"

COLORS_CHOICES = ("with", "without")
STAT_CHOICES = ("bose", "fermi", "dist", "all")
SWEEP_CHOICES = ("beta", "length")
SPACING_CHOICES = ("linear", "geometric")
OUTPUT_CHOICES = ("delta_s", "work", "s_unmixed", "s_mixed", "mean_energy")

# Flat file keys mirror the CLI long flags; the value names the sections they feed.
FLAG_SECTIONS = {
    "n": ("point", "sweep"),
    "colors": ("point", "sweep"),
    "stat": ("point", "sweep"),
    "beta": ("point", "sweep"),
    "length": ("point", "sweep"),
    "sweep": ("sweep",),
    "from": ("sweep",),
    "to": ("sweep",),
    "steps": ("sweep",),
    "spacing": ("sweep",),
    "out": ("sweep",),
    "outputs": ("sweep",),
    "workers": ("sweep",),
    "profile": ("verify",),
    "tol": ("numerics",),
}


def import_module_attr(module_path: str, attr_name: str) -> Any:
    module = importlib.import_module(module_path)
    return deepcopy(getattr(module, attr_name))


def preset_display_name(module_path: str) -> str:
    module = importlib.import_module(module_path)
    return str(getattr(module, "DISPLAY_NAME", module_path))


def merge_overrides(base: Dict[str, Any], overrides: Optional[Dict[str, Any]]) -> Dict[str, Any]:
    merged = deepcopy(base)
    if not overrides:
        return merged

    for key, value in overrides.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = merge_overrides(merged[key], value)
        else:
            merged[key] = deepcopy(value)
    return merged


def _positive_float(value: Any, field_name: str) -> float:
    try:
        number = float(value)
    except (TypeError, ValueError):
        raise ValueError(f"{field_name} must be a number, got {value!r}") from None
    if not number > 0.0:
        raise ValueError(f"{field_name} must be greater than 0, got {value!r}")
    return number


def _positive_int(value: Any, field_name: str, minimum: int = 1) -> int:
    try:
        number = int(str(value).strip())
    except (TypeError, ValueError):
        raise ValueError(f"{field_name} must be an integer, got {value!r}") from None
    if number < minimum:
        raise ValueError(f"{field_name} must be at least {minimum}, got {value!r}")
    return number


def _choice(value: Any, choices, field_name: str) -> str:
    text = str(value).strip().lower()
    if text not in choices:
        raise ValueError(f"{field_name} must be one of {', '.join(choices)}, got {value!r}")
    return text


def normalize_outputs(values: Any) -> List[str]:
    if isinstance(values, str):
        values = [item for item in values.split(",") if item.strip()]
    outputs = [_choice(item, OUTPUT_CHOICES, "outputs") for item in values]
    for required in ("delta_s", "work"):
        if required not in outputs:
            outputs.insert(0 if required == "delta_s" else 1, required)
    return outputs


def normalize_numerics(numerics: Dict[str, Any]) -> Dict[str, Any]:
    return {
        "tol": _positive_float(numerics.get("tol", 1e-13), "numerics.tol"),
        "oracle_tolerance": _positive_float(
            numerics.get("oracle_tolerance", 1e-12), "numerics.oracle_tolerance"
        ),
        "oracle_level_cap": _positive_int(numerics.get("oracle_level_cap", 10000), "numerics.oracle_level_cap"),
    }


def normalize_point(point: Dict[str, Any]) -> Dict[str, Any]:
    return {
        "n": _positive_int(point["n"], "point.n"),
        "colors": _choice(point["colors"], COLORS_CHOICES, "point.colors"),
        "stat": _choice(point["stat"], STAT_CHOICES, "point.stat"),
        "beta": _positive_float(point["beta"], "point.beta"),
        "length": _positive_float(point["length"], "point.length"),
    }


def normalize_sweep(sweep: Dict[str, Any]) -> Dict[str, Any]:
    normalized = {
        "n": _positive_int(sweep["n"], "sweep.n"),
        "colors": _choice(sweep["colors"], COLORS_CHOICES, "sweep.colors"),
        "stat": _choice(sweep["stat"], STAT_CHOICES, "sweep.stat"),
        "sweep": _choice(sweep["sweep"], SWEEP_CHOICES, "sweep.sweep"),
        "beta": _positive_float(sweep["beta"], "sweep.beta"),
        "length": _positive_float(sweep["length"], "sweep.length"),
        "from": _positive_float(sweep["from"], "sweep.from"),
        "to": _positive_float(sweep["to"], "sweep.to"),
        "steps": _positive_int(sweep["steps"], "sweep.steps", minimum=2),
        "spacing": _choice(sweep["spacing"], SPACING_CHOICES, "sweep.spacing"),
        "outputs": normalize_outputs(sweep.get("outputs", ["delta_s", "work"])),
        "workers": _positive_int(sweep.get("workers", 1), "sweep.workers"),
        "out": str(sweep["out"]),
    }
    if not normalized["from"] < normalized["to"]:
        raise ValueError(
            f"sweep.from {normalized['from']} must be below sweep.to {normalized['to']}"
        )
    return normalized


def normalize_verify(verify: Dict[str, Any]) -> Dict[str, Any]:
    return {"profile": str(verify.get("profile", "default")).strip()}


def normalize_logging(logging_config: Dict[str, Any]) -> Dict[str, Any]:
    log_dir = logging_config.get("log_dir", "logs")
    return {
        "log_dir": str(log_dir) if log_dir else None,
        "max_sessions": _positive_int(logging_config.get("max_sessions", 30), "logging.max_sessions", 0),
    }


def parse_flag_file(path: str) -> Dict[str, str]:
    """Read a flat key=value file whose keys mirror the CLI long flags."""
    values = {}
    with open(path, "r", encoding="utf-8") as file_obj:
        for lineno, raw_line in enumerate(file_obj, start=1):
            line = raw_line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value, got {raw_line.strip()!r}")
            key, value = (part.strip() for part in line.split("=", 1))
            key = key.lstrip("-").replace("-", "_")
            if key not in FLAG_SECTIONS:
                raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
            values[key] = value
    return values


def flags_to_overrides(flags: Dict[str, Any]) -> Dict[str, Dict[str, Any]]:
    """Spread flat flag values into the preset sections they configure."""
    overrides: Dict[str, Dict[str, Any]] = {}
    for key, value in flags.items():
        if value is None:
            continue
        if key not in FLAG_SECTIONS:
            raise ValueError(f"unknown flag {key!r}")
        for section in FLAG_SECTIONS[key]:
            overrides.setdefault(section, {})[key] = value
    return overrides


def build_runtime_configuration(
    preset_module: str,
    runtime_overrides: Optional[Dict[str, Any]] = None,
) -> Dict[str, Dict[str, Any]]:
    preset = import_module_attr(DEFAULT_ACTIVE_PRESET, "PRESET")
    if preset_module != DEFAULT_ACTIVE_PRESET:
        preset = merge_overrides(preset, import_module_attr(preset_module, "PRESET"))
    preset = merge_overrides(preset, runtime_overrides)

    return {
        "numerics": normalize_numerics(preset.get("numerics", {})),
        "point": normalize_point(preset["point"]),
        "sweep": normalize_sweep(preset["sweep"]),
        "verify": normalize_verify(preset.get("verify", {})),
        "logging": normalize_logging(preset.get("logging", {})),
    }
