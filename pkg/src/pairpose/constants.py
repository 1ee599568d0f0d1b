"""Numerical tolerances shared across the package."""

import math

# Type invariants (unit norms, orthonormality, det = +1).
UNIT_TOL = 1e-9
# Axis-angle <-> matrix round trips.
ROUNDTRIP_TOL = 1e-8
# Below this norm a vector has no usable direction.
DEGENERATE_NORM = 1e-12
# Pair construction: coincident world points / parallel bearings.
PAIR_DEGENERATE = 1e-9
# 1D vote stops refining intervals narrower than this fraction of the domain.
VOTE_MIN_HALF_WIDTH = 1e-9

SQRT3 = math.sqrt(3.0)
HALF_PI = 0.5 * math.pi

DEFAULT_DELTA = 0.015
ALL_PAIRS_CAP = 200
