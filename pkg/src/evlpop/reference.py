"""Published macro-F1 values used as fixed comparison constants.

Keys are dataset names as they appear in the benchmark archive.  Values for the
evolving methods are ``(mean, std)``; ``None`` marks a std that was not
reported.  The peer methods are never re-run here.
"""

PEER_F1 = {
    "1CDT": {"COMPOSE": 0.99, "LEVELiw": 0.99, "PSO": (0.99, 0.002), "GA": (0.99, 0.002)},
    "4CR": {"COMPOSE": 0.99, "LEVELiw": 0.99, "PSO": (0.99, 0.001), "GA": (0.99, 0.001)},
    "1CSurr": {"COMPOSE": 0.90, "LEVELiw": 0.63, "PSO": (0.95, 0.004), "GA": (0.95, 0.024)},
    "GEARS": {"COMPOSE": 0.96, "LEVELiw": 0.93, "PSO": (0.82, 0.001), "GA": (0.91, 0.003)},
    "UG_2C_2D": {"COMPOSE": 0.94, "LEVELiw": 0.73, "PSO": (0.91, 0.000), "GA": (0.96, 0.001)},
    "UG_2C_3D": {"COMPOSE": 0.67, "LEVELiw": 0.64, "PSO": (0.96, 0.001), "GA": (0.97, 0.001)},
    "UG_2C_5D": {"COMPOSE": 0.90, "LEVELiw": 0.60, "PSO": (0.86, 0.001), "GA": (0.92, None)},
    "4CRE_V1": {"COMPOSE": 0.20, "LEVELiw": 0.24, "PSO": (0.28, 0.031), "GA": (0.32, 0.061)},
    "4CRE_V2": {"COMPOSE": 0.19, "LEVELiw": 0.24, "PSO": (0.25, 0.061), "GA": (0.33, 0.067)},
    "Keystroke": {"COMPOSE": 0.85, "LEVELiw": 0.78, "PSO": (0.73, 0.023), "GA": (0.76, 0.004)},
}

# Agents-per-class sweeps: agents -> (F1, seconds) for each method.
AGENT_SWEEP = {
    "1CDT": {
        "PSO": {10: (0.98, 0.3), 20: (0.99, 0.57), 50: (0.99, 1.12), 100: (0.99, 2.4)},
        "GA": {10: (0.99, 0.4), 20: (0.99, 0.8), 50: (0.99, 2.0), 100: (0.99, 4.5)},
    },
    "UG_2C_5D": {
        "PSO": {10: (0.81, 5.5), 20: (0.84, 10.3), 50: (0.86, 19.6), 100: (0.86, 46.1)},
        "GA": {10: (0.81, 7.0), 20: (0.85, 12.6), 50: (0.91, 31.7), 100: (0.92, 73.0)},
    },
}


def reference_value(dataset, method):
    """Mean F1 reported for ``method`` on ``dataset``."""
    value = PEER_F1[dataset][method]
    return value[0] if isinstance(value, tuple) else value
