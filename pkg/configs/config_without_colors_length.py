DISPLAY_NAME = "N=2 / without colors / length sweep / beta=0.5"

PRESET = {
    "sweep": {
        "n": 2,
        "colors": "without",
        "sweep": "length",
        "beta": 0.5,
        "from": 1.0,
        "to": 100.0,
        "steps": 60,
        "spacing": "geometric",
        "outputs": ["delta_s", "work", "s_unmixed", "s_mixed"],
        "out": "without_colors_length.csv",
    },
}
