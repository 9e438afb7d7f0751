"""Free boundary minimal surfaces in the unit ball, the critical catenoid,
and gradient images of homogeneous harmonic functions on cones."""

from .catenoid import CatenoidParams, solve_critical, to_weierstrass
from .cone import (AxisymmetricHarmonic, ConeDomain, OnePhaseSolution, herisson_surface,
                   solve_one_phase, solve_pr2_cap, spectral_disk_check)
from .numeric import LaurentPoly, curvatures, find_root, integrate_path, surface_jet
from .weierstrass import WeierstrassData, free_boundary_report, surface_point

__version__ = "0.1.0"
