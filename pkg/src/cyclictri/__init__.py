"""Triangulations of even-dimensional cyclic polytopes C(m, 2d) as sets of
d-arcs: quivers, retrograde paths, mutability, flips, and the cut/slice
description of acyclic quivers."""

from .errors import *  # noqa: F401,F403
from .arcs import *  # noqa: F401,F403
from .quiver import *  # noqa: F401,F403
from .retrograde import *  # noqa: F401,F403
from .cutslice import *  # noqa: F401,F403
from .geometry import validate_cells, polytope_volume  # noqa: F401
from .explorer import *  # noqa: F401,F403

__version__ = "0.1.0"
