"""Limited-memory quasi-Newton minimisation with an optional L1 term (OWL-QN)."""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field

import numpy as np

logger = logging.getLogger(__name__)


@dataclass
class OptimizeResult:
    x: np.ndarray
    fun: float
    n_iter: int
    converged: bool
    history: list[float] = field(default_factory=list)


def pseudo_gradient(x, g, l1):
    """Minimum-norm subgradient of ``f(x) + l1 * |x|_1``."""
    if l1 == 0.0:
        return g.copy()
    pg = np.where(x > 0, g + l1, np.where(x < 0, g - l1, 0.0))
    at_zero = x == 0
    right = g + l1
    left = g - l1
    pg = np.where(at_zero & (right < 0), right, pg)
    pg = np.where(at_zero & (left > 0), left, pg)
    return pg


def _two_loop(pg, s_hist, y_hist):
    q = pg.copy()
    alphas = []
    for s, y in zip(reversed(s_hist), reversed(y_hist)):
        rho = 1.0 / y.dot(s)
        a = rho * s.dot(q)
        alphas.append((rho, a))
        q -= a * y
    if s_hist:
        s, y = s_hist[-1], y_hist[-1]
        q *= s.dot(y) / y.dot(y)
    for (s, y), (rho, a) in zip(zip(s_hist, y_hist), reversed(alphas)):
        b = rho * y.dot(q)
        q += (a - b) * s
    return -q


def owlqn(fun, x0, l1=0.0, max_iter=100, m=10, gtol=1e-6, ftol=1e-12,
          max_linesearch=40, callback=None) -> OptimizeResult:
    """Minimise ``fun(x)[0] + l1 * |x|_1``.

    ``fun`` returns ``(value, gradient)`` of the smooth part. With ``l1 == 0``
    this is plain L-BFGS with a backtracking Armijo line search. Stops when the
    max-norm of the pseudo-gradient drops below ``gtol`` or after ``max_iter``
    iterations.
    """
    x = np.array(x0, dtype=float)
    f, g = fun(x)
    obj = f + l1 * np.abs(x).sum()
    s_hist: deque = deque(maxlen=m)
    y_hist: deque = deque(maxlen=m)
    history = [obj]
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        pg = pseudo_gradient(x, g, l1)
        if np.max(np.abs(pg), initial=0.0) < gtol:
            converged = True
            it -= 1
            break
        d = _two_loop(pg, s_hist, y_hist)
        if l1 > 0:
            d = np.where(d * pg >= 0, 0.0, d)
        slope = pg.dot(d)
        if slope >= 0:
            # history went bad; restart from steepest descent
            s_hist.clear()
            y_hist.clear()
            d = -pg
            slope = pg.dot(d)
        orthant = np.where(x != 0, np.sign(x), np.sign(-pg))
        step = 1.0 / np.linalg.norm(pg) if not s_hist else 1.0
        for _ in range(max_linesearch):
            x_new = x + step * d
            if l1 > 0:
                x_new = np.where(np.sign(x_new) == orthant, x_new, 0.0)
            f_new, g_new = fun(x_new)
            obj_new = f_new + l1 * np.abs(x_new).sum()
            if obj_new <= obj + 1e-4 * pg.dot(x_new - x):
                break
            step *= 0.5
        else:
            logger.warning("line search failed at iteration %d", it)
            break
        s = x_new - x
        y = g_new - g
        if s.dot(y) > 1e-12:
            s_hist.append(s)
            y_hist.append(y)
        rel = abs(obj - obj_new) / max(abs(obj), abs(obj_new), 1.0)
        x, f, g, obj = x_new, f_new, g_new, obj_new
        history.append(obj)
        if callback is not None:
            callback(it, obj)
        if rel < ftol:
            converged = True
            break
    return OptimizeResult(x=x, fun=float(obj), n_iter=it, converged=converged, history=history)
