DISPLAY_NAME = "runtime / default"

PRESET = {
    "numerics": {
        "tol": 1e-13,
        "oracle_tolerance": 1e-12,
        "oracle_level_cap": 10000,
    },
    "point": {
        "n": 2,
        "colors": "with",
        "stat": "all",
        "beta": 1.0,
        "length": 10.0,
    },
    "sweep": {
        "n": 2,
        "colors": "with",
        "stat": "all",
        "sweep": "length",
        "beta": 1.0,
        "length": 10.0,
        "from": 1.0,
        "to": 100.0,
        "steps": 60,
        "spacing": "geometric",
        "outputs": ["delta_s", "work"],
        "workers": 1,
        "out": "sweep.csv",
    },
    "verify": {"profile": "default"},
    "logging": {"log_dir": "logs", "max_sessions": 30},
}
