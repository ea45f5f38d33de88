"""Derivative-free simplex minimization (Nelder-Mead, 1965; the variant
described for MATLAB's fminsearch by Lagarias et al., 1998) plus seeded
multistart.

Deterministic: given the same objective, start and config the full iterate
sequence is reproducible.  Vertex ordering breaks ties by insertion index.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import ObjectiveFailureError


@dataclass
class SimplexConfig:
    max_evals: int = 1_000_000
    x_tolerance: float = 1e-8
    f_tolerance: float = 1e-12
    reflection: float = 1.0
    expansion: float = 2.0
    contraction: float = 0.5
    shrink: float = 0.5
    initial_step: float = 0.05

    def __post_init__(self):
        if self.max_evals <= 0:
            raise ValueError("max_evals must be positive")
        if self.x_tolerance <= 0 or self.f_tolerance <= 0:
            raise ValueError("tolerances must be positive")
        if self.reflection <= 0:
            raise ValueError("reflection coefficient must be > 0")
        if self.expansion <= 1:
            raise ValueError("expansion coefficient must be > 1")
        if not 0 < self.contraction < 1:
            raise ValueError("contraction coefficient must lie in (0, 1)")
        if not 0 < self.shrink < 1:
            raise ValueError("shrink coefficient must lie in (0, 1)")


@dataclass
class MinimizeResult:
    argmin: np.ndarray
    fmin: float
    evals_used: int
    converged: bool
    error: Optional[str] = None


def minimize(objective: Callable[[np.ndarray], float], x0,
             config: SimplexConfig | None = None,
             trace: Callable[[dict], None] | None = None) -> MinimizeResult:
    """Locate a local minimizer of ``objective`` starting from ``x0``.

    The objective must be total (large penalty values are fine, NaN is not).
    ``trace``, when given, receives a dict per iteration (used by property
    tests; not part of the stable API).
    """
    cfg = config or SimplexConfig()
    x0 = np.asarray(x0, dtype=float).copy()
    if not np.isfinite(x0).all():
        raise ValueError("x0 must be finite")
    dim = x0.size

    evals = 0

    def call(x):
        nonlocal evals
        evals += 1
        f = float(objective(x))
        if math.isnan(f):
            raise ObjectiveFailureError(f"objective returned NaN at {x.tolist()}")
        return f

    # initial simplex: bump each coordinate, relative step for large entries
    order = 0
    simplex = [(call(x0), order, x0)]
    for i in range(dim):
        x = x0.copy()
        step = cfg.initial_step * (abs(x[i]) if abs(x[i]) > 1.0 else 1.0)
        x[i] += step
        order += 1
        simplex.append((call(x), order, x))
    simplex.sort(key=lambda v: (v[0], v[1]))

    rho, chi, gamma, sigma = cfg.reflection, cfg.expansion, cfg.contraction, cfg.shrink
    converged = False

    while evals < cfg.max_evals:
        best_f, _, best_x = simplex[0]
        x_spread = max(np.max(np.abs(v[2] - best_x)) for v in simplex[1:])
        f_spread = max(abs(v[0] - best_f) for v in simplex[1:])
        if trace is not None:
            trace({"best": best_f, "x_spread": x_spread, "f_spread": f_spread,
                   "evals": evals})
        if x_spread <= cfg.x_tolerance and f_spread <= cfg.f_tolerance:
            converged = True
            break
        if evals + dim + 2 > cfg.max_evals:
            break  # cannot complete another full step within budget

        worst_f, _, worst_x = simplex[-1]
        centroid = np.mean([v[2] for v in simplex[:-1]], axis=0)

        def accept(f, x):
            nonlocal order
            order += 1
            simplex[-1] = (f, order, x)
            simplex.sort(key=lambda v: (v[0], v[1]))

        xr = centroid + rho * (centroid - worst_x)
        fr = call(xr)
        if fr < simplex[0][0]:
            xe = centroid + chi * rho * (centroid - worst_x)
            fe = call(xe)
            if fe < fr:
                accept(fe, xe)
            else:
                accept(fr, xr)
        elif fr < simplex[-2][0]:
            accept(fr, xr)
        elif fr < worst_f:
            xc = centroid + gamma * rho * (centroid - worst_x)
            fc = call(xc)
            if fc <= fr:
                accept(fc, xc)
            else:
                _shrink(simplex, sigma, call)
        else:
            xcc = centroid - gamma * (centroid - worst_x)
            fcc = call(xcc)
            if fcc < worst_f:
                accept(fcc, xcc)
            else:
                _shrink(simplex, sigma, call)

    best_f, _, best_x = simplex[0]
    return MinimizeResult(argmin=best_x, fmin=best_f, evals_used=evals,
                          converged=converged)


def _shrink(simplex, sigma, call):
    best_f, best_order, best_x = simplex[0]
    for i in range(1, len(simplex)):
        x = best_x + sigma * (simplex[i][2] - best_x)
        simplex[i] = (call(x), simplex[i][1], x)
    simplex.sort(key=lambda v: (v[0], v[1]))


def multistart(objective: Callable[[np.ndarray], float],
               sampler: Callable[[int], np.ndarray],
               m: int,
               config: SimplexConfig | None = None) -> list[MinimizeResult]:
    """Run ``minimize`` from ``sampler(0..m-1)``; results stay in sampler
    order.  A failing start is recorded on its result instead of aborting
    the remaining starts."""
    if m < 1:
        raise ValueError("need at least one start")
    results: list[MinimizeResult] = []
    for i in range(m):
        x0 = np.asarray(sampler(i), dtype=float)
        try:
            results.append(minimize(objective, x0, config))
        except ObjectiveFailureError as exc:
            results.append(MinimizeResult(argmin=x0, fmin=math.inf, evals_used=0,
                                          converged=False, error=str(exc)))
    return results
