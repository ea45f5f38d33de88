"""Numeric kernel backend selection.

The compiled Cython module is preferred; the pure NumPy/Python fallback is
used when the extension was not built or when ``BEZTOPO_PURE=1`` is set in
the environment (the benchmark uses the env var to time both paths).
"""
import os

from . import pure

if os.environ.get("BEZTOPO_PURE"):
    impl = pure
else:
    try:
        from . import speedups as impl  # type: ignore[no-redef]
    except ImportError:
        impl = pure

BACKEND = impl.BACKEND

bernstein_matrix = impl.bernstein_matrix
bezier_points = impl.bezier_points
selfx_value = impl.selfx_value
edges_from_angles = impl.edges_from_angles
sf_value = impl.sf_value
