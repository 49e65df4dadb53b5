# src/pntap/utils/rng.py
import random

import numpy as np


def make_rng(seed: int) -> random.Random:
    return random.Random(seed)


def make_np_rng(seed: int, stream: int = 0) -> np.random.Generator:
    """Independent numpy generator per (seed, stream) so suites don't share draws."""
    return np.random.default_rng([int(seed), int(stream)])
