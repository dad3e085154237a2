"""Piecewise Möbius transformations on the Riemann sphere.

Exact pre-discontinuity arcs, basin rasters, periodic point census and
checks of hyperbolicity, alpha-expansion and structural stability
hypotheses.
"""

from __future__ import annotations

__version__ = "0.1.0"

from .errors import (BadParameter, DegenerateCircline, DegenerateMap, DepthOverflow,
                     IdentityMap, NoRegion, PMTError, SceneError)
from .sphere import (INF, Circline, MapClass, MoebiusMap, Side, chordal_dist,
                     circline_intersect, spherical_deriv)
from .partition import BOUNDARY, Partition, Region, disk_partition
from .pmt import PMT, Consistency, Termination, word_map
from .presets import PRESETS, family, preset
from .spiderweb import Arc, SpiderwebApprox, backward_arcs
from .raster import Label, PlaneWindow, SphereWindow, raster_classify
from .analysis import (AlphaStatus, Kind, PeriodicPoint, StabilityConfig, Verdict,
                       alpha_expanding_check, alpha_sample, find_periodic,
                       hyperbolicity_check, parameter_sweep, schottky_hypothesis_check,
                       stability_report)
from .scene import export_scene, load_scene, scene_from_dict

__all__ = [name for name in dir() if not name.startswith("_")]
