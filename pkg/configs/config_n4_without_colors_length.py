DISPLAY_NAME = "N=4 / without colors / length sweep"

PRESET = {
    "sweep": {
        "n": 4,
        "colors": "without",
        "sweep": "length",
        "beta": 1.0,
        "from": 1.0,
        "to": 10000.0,
        "steps": 60,
        "spacing": "geometric",
        "out": "n4_without_colors_length.csv",
    },
}
