"""beztopo: topological disagreement between Bezier curves and their control
polygons -- detection, certification and generation.

Submodules
----------
geometry   points, closed control polygons, Bezier evaluation, subdivision
optimize   Nelder-Mead simplex minimization and seeded multistart
selfx      self-intersection functional and the equilateral generator
knot       knot diagrams, trefoil certification, exact PL push verification
workbench  sessions, analyses and run manifests shared by the CLI and server
"""
from ._kernels import BACKEND as kernel_backend

__version__ = "0.1.0"
__all__ = ["kernel_backend", "__version__"]
