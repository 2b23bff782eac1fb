DISPLAY_NAME = "N=2 / colors / beta sweep / length=20"

PRESET = {
    "sweep": {
        "n": 2,
        "colors": "with",
        "sweep": "beta",
        "length": 20.0,
        "from": 0.01,
        "to": 5.0,
        "steps": 60,
        "spacing": "geometric",
        "out": "colors_beta_length20.csv",
    },
}
