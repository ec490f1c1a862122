"""Vectorised safeguarded Newton iteration for increasing functions."""
from __future__ import annotations

from typing import Callable

import numpy as np

from .errors import ConvergenceError


def solve_increasing(
    fun: Callable[[np.ndarray], tuple[np.ndarray, np.ndarray]],
    targets: np.ndarray,
    lo: np.ndarray,
    hi: np.ndarray,
    guess: np.ndarray | None = None,
    tol: float = 1e-13,
    maxiter: int = 200,
) -> np.ndarray:
    """Solve ``g(y) = target`` elementwise on brackets ``[lo, hi]``.

    ``fun(y)`` returns ``(g(y), g'(y))``. Newton steps that leave the current
    bracket, or that failed to halve it on the previous iteration, are
    replaced by bisection, so convergence is at least linear; if ``g'`` is
    unusable the method degrades to pure bisection.
    """
    targets = np.asarray(targets, dtype=float)
    lo = np.array(lo, dtype=float)
    hi = np.array(hi, dtype=float)
    y = 0.5 * (lo + hi) if guess is None else np.clip(np.array(guess, dtype=float), lo, hi)
    glo, _ = fun(lo)
    ghi, _ = fun(hi)
    if np.any(glo - targets > tol) or np.any(ghi - targets < -tol):
        raise ConvergenceError("root is not bracketed")
    width = hi - lo
    for _ in range(maxiter):
        g, dg = fun(y)
        r = g - targets
        done = (np.abs(r) <= tol) | (hi - lo <= 4 * np.spacing(np.maximum(np.abs(y), 1.0)))
        if np.all(done):
            return y
        lo = np.where(r < 0, y, lo)
        hi = np.where(r > 0, y, hi)
        # Newton is only trusted while it at least halves the bracket
        slow = hi - lo > 0.5 * width
        width = hi - lo
        with np.errstate(divide="ignore", invalid="ignore"):
            step = y - r / dg
        bad = ~np.isfinite(step) | (step <= lo) | (step >= hi) | slow
        step = np.where(bad, 0.5 * (lo + hi), step)
        y = np.where(done, y, step)
    g, _ = fun(y)
    worst = float(np.max(np.abs(g - targets)))
    raise ConvergenceError(f"inversion did not converge (residual {worst:.3g})")
