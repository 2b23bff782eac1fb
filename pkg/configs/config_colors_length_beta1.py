DISPLAY_NAME = "N=2 / colors / length sweep / beta=1"

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
        "out": "colors_length_beta1.csv",
    },
}
