"""Preset finite groups known to the engine."""

# family -> (short prefix, smallest parameter, largest parameter, description)
PRESET_FAMILIES = {
    "trivial": {
        "prefix": "1",
        "min": None,
        "max": None,
        "description": "Trivial group of order 1",
    },
    "cyclic": {
        "prefix": "Z",
        "min": 1,
        "max": 2000,
        "description": "Cyclic group Z_n generated by the n-cycle (0 1 ... n-1)",
    },
    "dihedral": {
        "prefix": "D",
        "min": 3,
        "max": 1000,
        "description": "Symmetry group of the regular n-gon, order 2n",
    },
    "symmetric": {
        "prefix": "S",
        "min": 1,
        "max": 6,
        "description": "Symmetric group S_n on n points generated by (0 1) and (0 1 ... n-1)",
    },
    "quaternion8": {
        "prefix": "Q8",
        "min": None,
        "max": None,
        "description": "Quaternion group {±1, ±i, ±j, ±k} in its regular representation",
    },
}

# Groups every selftest battery and the cache warmer walk through.
STANDARD_PRESETS = ["1", "Z2", "Z3", "S3", "D4", "Q8"]

# Quaternion units as (real, i, j, k) coordinates, in element order.
QUATERNION_UNITS = [
    (1, 0, 0, 0),
    (-1, 0, 0, 0),
    (0, 1, 0, 0),
    (0, -1, 0, 0),
    (0, 0, 1, 0),
    (0, 0, -1, 0),
    (0, 0, 0, 1),
    (0, 0, 0, -1),
]
