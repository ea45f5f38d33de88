"""Pure NumPy/Python fallback for the hot numeric kernels.

Mirrors the compiled module in ``speedups.pyx`` function-for-function; the
package selects whichever is importable (see ``__init__``).  Keep the two in
sync: ``tests/test_kernels.py`` cross-checks them on random inputs.
"""
import math

import numpy as np

BACKEND = "pure"


def bernstein_matrix(degree, ts):
    """Basis matrix B with B[k, i] = C(degree, i) * ts[k]^i * (1-ts[k])^(degree-i)."""
    ts = np.asarray(ts, dtype=float)
    i = np.arange(degree + 1)
    coeff = np.array([math.comb(degree, int(k)) for k in i], dtype=float)
    t = ts[:, None]
    return coeff * t**i * (1.0 - t) ** (degree - i)


def bezier_points(control, ts):
    """Evaluate a Bezier curve (any ambient dimension) at many parameters."""
    control = np.asarray(control, dtype=float)
    return bernstein_matrix(control.shape[0] - 1, ts) @ control


def selfx_value(q, s, t):
    """Normalized difference-quotient functional of edge vectors q at (s, t).

    Equals (C(1-s) - C(t)) / (n * ((1-s) - t)) wherever that quotient is
    defined; this polynomial form is total.
    """
    q = np.asarray(q, dtype=float)
    n = q.shape[0]
    out = np.zeros(q.shape[1])
    for i in range(n):
        for j in range(n - i):
            w = math.comb(n - 1 - i, j) * s ** (n - 1 - i - j) * (1.0 - s) ** j
            for k in range(i + 1):
                out += w * math.comb(i, k) * (1.0 - t) ** (i - k) * t**k * q[j + k]
    return out / n


def edges_from_angles(x, n):
    """Unit edge vectors from (n-1) polar/azimuthal angle pairs; the last edge
    closes the polygon (negative sum of the others)."""
    x = np.asarray(x, dtype=float)
    m = n - 1
    phi, theta = x[:m], x[m:2 * m]
    q = np.empty((n, 3))
    sp = np.sin(phi)
    q[:m, 0] = sp * np.cos(theta)
    q[:m, 1] = sp * np.sin(theta)
    q[:m, 2] = np.cos(phi)
    q[m] = -q[:m].sum(axis=0)
    return q


def sf_value(x, n):
    """Combined objective: ||selfx_value|| + |(len of dependent edge)^2 - 1|.

    ``x`` packs [phi (n-1), theta (n-1), s, t].
    """
    q = edges_from_angles(x, n)
    closure = abs(float(q[n - 1] @ q[n - 1]) - 1.0)
    s, t = float(x[2 * n - 2]), float(x[2 * n - 1])
    v = selfx_value(q, s, t)
    return float(np.sqrt(v @ v)) + closure
