"""Rebuild data/land_mask_1deg.bin from the global-land-mask package.

Layout: 180 rows x 360 columns of 0/1 bytes, row-major. Row 0 is the band
[90N, 89N), column 0 is [180W, 179W). A cell is land when at least half of
a 5x5 grid of sample points inside it is land.
"""
import sys

import numpy as np
from global_land_mask import globe

SUB = 5


def build() -> np.ndarray:
    offsets = (np.arange(SUB) + 0.5) / SUB
    mask = np.zeros((180, 360), dtype=np.uint8)
    for row in range(180):
        lat_top = 90.0 - row
        lats = lat_top - offsets
        for col in range(360):
            lons = -180.0 + col + offsets
            la, lo = np.meshgrid(lats, lons, indexing="ij")
            frac = globe.is_land(la, lo).mean()
            mask[row, col] = 1 if frac >= 0.5 else 0
    return mask


if __name__ == "__main__":
    out = sys.argv[1] if len(sys.argv) > 1 else "data/land_mask_1deg.bin"
    m = build()
    m.tofile(out)
    print(f"wrote {out}: {int(m.sum())} land cells of {m.size}")
