DISPLAY_NAME = "N=2 / colors / beta sweep / length=10"

PRESET = {
    "sweep": {
        "n": 2,
        "colors": "with",
        "sweep": "beta",
        "length": 10.0,
        "from": 0.01,
        "to": 5.0,
        "steps": 60,
        "spacing": "geometric",
        "out": "colors_beta_length10.csv",
    },
}
