DISPLAY_NAME = "N=2 / without colors / work at high temperature"

PRESET = {
    "sweep": {
        "n": 2,
        "colors": "without",
        "sweep": "beta",
        "length": 1.0,
        "from": 1e-5,
        "to": 1e-2,
        "steps": 40,
        "spacing": "geometric",
        "out": "without_colors_work_temperature.csv",
    },
}
