"""Vectorised jet arithmetic.

A jet array has shape ``(m + 1, P)``: row ``j`` holds the ``j``-th derivative
at each of ``P`` points. Internally products and compositions are done on
Taylor coefficients (row ``j`` divided by ``j!``).
"""
from __future__ import annotations

from math import comb, factorial

import numpy as np


def _fact(m: int) -> np.ndarray:
    return np.array([float(factorial(j)) for j in range(m + 1)])


def to_taylor(jet: np.ndarray) -> np.ndarray:
    jet = np.asarray(jet, dtype=float)
    return jet / _fact(jet.shape[0] - 1).reshape((-1,) + (1,) * (jet.ndim - 1))


def from_taylor(coef: np.ndarray) -> np.ndarray:
    coef = np.asarray(coef, dtype=float)
    return coef * _fact(coef.shape[0] - 1).reshape((-1,) + (1,) * (coef.ndim - 1))


def series_mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Truncated Cauchy product of two Taylor coefficient arrays."""
    m = min(a.shape[0], b.shape[0])
    out = np.zeros((m,) + np.broadcast_shapes(a.shape[1:], b.shape[1:]))
    for n in range(m):
        for i in range(n + 1):
            out[n] += a[i] * b[n - i]
    return out


def compose(outer: np.ndarray, inner: np.ndarray) -> np.ndarray:
    """Jet of ``F o G`` from the jet of ``F`` at ``G(x)`` and the jet of ``G`` at ``x``.

    Both inputs are derivative jets with the same number of rows. This is the
    Faa di Bruno formula evaluated by substituting one truncated Taylor series
    into another.
    """
    m = outer.shape[0] - 1
    if inner.shape[0] - 1 != m:
        raise ValueError("outer and inner jets must have the same order")
    delta = to_taylor(inner)
    delta[0] = 0.0
    f_coef = to_taylor(outer)
    power = np.zeros_like(delta)
    power[0] = 1.0
    out = f_coef[0] * power
    for j in range(1, m + 1):
        power = series_mul(power, delta)
        out = out + f_coef[j] * power
    return from_taylor(out)


def exp_jet(F: np.ndarray) -> np.ndarray:
    """Derivatives of ``u = exp(F)`` from those of ``F``.

    Uses ``u' = F' u`` and Leibniz: ``u^(m+1) = sum_i C(m, i) F^(i+1) u^(m-i)``.
    """
    F = np.asarray(F, dtype=float)
    u = np.empty_like(F)
    u[0] = np.exp(F[0])
    for m in range(F.shape[0] - 1):
        acc = np.zeros_like(F[0])
        for i in range(m + 1):
            acc += comb(m, i) * F[i + 1] * u[m - i]
        u[m + 1] = acc
    return u


def log_derivative_jet(u: np.ndarray) -> np.ndarray:
    """Derivatives of ``w = u'/u`` given ``u, u', ..., u^(m)``; returns ``m`` rows.

    From ``u' = u w``: ``u^(n+1) = sum_i C(n, i) u^(i) w^(n-i)``, solved for
    ``w^(n)`` one order at a time.
    """
    u = np.asarray(u, dtype=float)
    m = u.shape[0] - 1
    w = np.empty((m,) + u.shape[1:])
    for n in range(m):
        acc = u[n + 1].copy()
        for i in range(1, n + 1):
            acc -= comb(n, i) * u[i] * w[n - i]
        w[n] = acc / u[0]
    return w
