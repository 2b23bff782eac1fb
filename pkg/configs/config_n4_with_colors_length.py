DISPLAY_NAME = "N=4 / with colors / length sweep"

PRESET = {
    "sweep": {
        "n": 4,
        "colors": "with",
        "sweep": "length",
        "beta": 1.0,
        "from": 1.0,
        "to": 10000.0,
        "steps": 60,
        "spacing": "geometric",
        "out": "n4_with_colors_length.csv",
    },
}
