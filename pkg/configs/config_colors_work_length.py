DISPLAY_NAME = "N=2 / colors / work vs length"

PRESET = {
    "sweep": {
        "n": 2,
        "colors": "with",
        "sweep": "length",
        "beta": 1.0,
        "from": 1.0,
        "to": 100.0,
        "steps": 60,
        "spacing": "geometric",
        "outputs": ["delta_s", "work", "mean_energy"],
        "out": "colors_work_length.csv",
    },
}
