"""Selects which preset is active at runtime."""
"""Default: config_runtime_default"""

ACTIVE_PRESET = "configs.config_runtime_default"

RUNTIME_OVERRIDES = {
    "logging": {
        "log_dir": "logs",
    },
}
