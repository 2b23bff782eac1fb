DISPLAY_NAME = "N=2 / colors / work at high temperature"

PRESET = {
    "sweep": {
        "n": 2,
        "colors": "with",
        "sweep": "beta",
        "length": 1.0,
        "from": 1e-5,
        "to": 1e-2,
        "steps": 40,
        "spacing": "geometric",
        "out": "colors_work_temperature.csv",
    },
}
