"""Counter-based random streams for reproducible optimization runs.

Every draw is addressed by (seed, stream label, integer path), so the same
draw is produced no matter how many workers evaluate particles or in which
order runs execute. Streams never share state; there is nothing to advance
or reset.
"""

from __future__ import annotations

import zlib

import numpy as np

# Stream labels; hashed into the Philox key so distinct uses cannot collide.
INIT_POS = "init_pos"
INIT_VEL = "init_vel"
R_COGNITIVE = "r_cognitive"
R_SOCIAL = "r_social"
RESAMPLE = "resample"
CALIBRATION = "calibration"
TRAVEL_MEAN = "travel_mean"


def stream(seed: int, label: str, *path: int) -> np.random.Generator:
    """Generator for the draw addressed by (seed, label, path).

    Philox is counter-based: key = (seed, crc32(label)), counter = path
    (up to four non-negative integers).
    """
    if len(path) > 4:
        raise ValueError("stream path supports at most four components")
    key = np.array([np.uint64(seed & 0xFFFFFFFFFFFFFFFF), np.uint64(zlib.crc32(label.encode()))])
    counter = np.zeros(4, dtype=np.uint64)
    for i, p in enumerate(path):
        counter[i] = np.uint64(p)
    return np.random.Generator(np.random.Philox(key=key, counter=counter))


def uniform(seed: int, label: str, path: tuple[int, ...], low, high, size) -> np.ndarray:
    """Uniform draw in [low, high) from the addressed stream."""
    g = stream(seed, label, *path)
    return g.uniform(low, high, size)
