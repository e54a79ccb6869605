"""
Base measures on the unit disk
==============================

Every experiment in this package starts from a finite atomic measure inside
the open unit disk: a list of distinct complex positions and positive weights.
This script builds the three generated families (uniform grid, Cantor dust,
Julia-set boundary), reports their bulk statistics and d-energies, and runs
the quarter-mass half-plane splitter on each.
"""

import numpy as np

from gmclab import (
    d_energy,
    generate_cantor_dust,
    generate_julia_boundary,
    generate_uniform_grid,
    split_half_plane,
)

measures = {
    "grid 16x16 r=0.8": generate_uniform_grid(16, 0.8),
    "cantor dust level 3 r=0.4": generate_cantor_dust(3, 0.4),
    "julia boundary c=-1 r=0.8": generate_julia_boundary(-1.0 + 0j, 256, 100, 0.8),
}

for name, m in measures.items():
    print(f"\n{name}")
    print(f"  atoms          {m.n}")
    print(f"  total mass     {m.total_mass:.6g}")
    print(f"  support radius {m.support_radius:.6g}")
    print(f"  min pair dist  {m.min_pair_distance():.6g}")
    # d-energy controls which chaos parameters are admissible later on
    for d in (0.5, 1.0, 1.5):
        print(f"  E_{d}           {d_energy(m, d):.6g}")
    res = split_half_plane(m)
    print(f"  split: angle={res.angle:.4f} offset={res.offset:.4f} "
          f"margin={res.margin:.4g}")
    print(f"         upper mass {res.upper_mass:.6g}, lower mass "
          f"{res.lower_mass:.6g} (each > total/4 = {m.total_mass / 4:.6g})")
