"""Closed-form diffeomorphisms with exact jets, used as test and demo inputs."""
from __future__ import annotations

from math import factorial

import numpy as np

from .errors import DomainError
from .funcspace import SmoothFunction

TWO_PI = 2.0 * np.pi


def identity_map() -> SmoothFunction:
    def jet_fn(x, m):
        out = np.zeros((m + 1, x.size))
        out[0] = x
        if m >= 1:
            out[1] = 1.0
        return out

    return SmoothFunction(jet_fn, name="identity")


def exp_map(a: float) -> SmoothFunction:
    """``x -> (e^{ax} - 1) / (e^a - 1)``; ``a = 0`` is the identity."""
    a = float(a)
    if a == 0.0:
        return identity_map()
    denom = np.expm1(a)

    def jet_fn(x, m):
        out = np.empty((m + 1, x.size))
        out[0] = np.expm1(a * x) / denom
        e = np.exp(a * x) / denom
        for j in range(1, m + 1):
            out[j] = a**j * e
        return out

    return SmoothFunction(jet_fn, name=f"exp({a})")


def mobius_map(t: float) -> SmoothFunction:
    """``x -> (1 + t) x / (1 + t x)`` for ``t > -1``; ``t = 0`` is the identity."""
    t = float(t)
    if not t > -1.0:
        raise DomainError(f"mobius parameter must exceed -1, got {t}")
    if t == 0.0:
        return identity_map()

    def jet_fn(x, m):
        out = np.empty((m + 1, x.size))
        q = 1.0 + t * x
        out[0] = (1.0 + t) * x / q
        for j in range(1, m + 1):
            out[j] = (1.0 + t) * (-1) ** (j + 1) * factorial(j) * t ** (j - 1) / q ** (j + 1)
        return out

    return SmoothFunction(jet_fn, name=f"mobius({t})")


def exp_inverse_map(a: float) -> SmoothFunction:
    """Inverse of :func:`exp_map`: ``y -> log(1 + c y) / a`` with ``c = e^a - 1``."""
    a = float(a)
    if a == 0.0:
        return identity_map()
    c = np.expm1(a)

    def jet_fn(x, m):
        out = np.empty((m + 1, x.size))
        q = 1.0 + c * x
        out[0] = np.log1p(c * x) / a
        for j in range(1, m + 1):
            out[j] = (-1) ** (j - 1) * factorial(j - 1) * c**j / (a * q**j)
        return out

    return SmoothFunction(jet_fn, name=f"expinv({a})")


def mobius_compose_param(t1: float, t2: float) -> float:
    """Parameter of ``mobius(t1) o mobius(t2)``."""
    return t1 + t2 + t1 * t2


def mobius_inverse_param(t: float) -> float:
    return -t / (1.0 + t)


def rotation_lift(t: float) -> SmoothFunction:
    def jet_fn(x, m):
        out = np.zeros((m + 1, x.size))
        out[0] = x + t
        if m >= 1:
            out[1] = 1.0
        return out

    return SmoothFunction(jet_fn, name=f"rotation({t})")


def cosine_lift(a: float, c: float = 0.0, t: float = 0.0) -> SmoothFunction:
    """Lift ``x + t + a (sin 2pi(x - c) + sin 2pi c) / 2pi`` with ``|a| < 1``.

    Without the shift ``t`` this fixes 0 and has derivative
    ``1 + a cos 2pi(x - c)``.
    """
    a, c, t = float(a), float(c), float(t)
    if not abs(a) < 1.0:
        raise DomainError(f"cosine amplitude must satisfy |a| < 1, got {a}")

    def jet_fn(x, m):
        out = np.empty((m + 1, x.size))
        arg = TWO_PI * (x - c)
        out[0] = x + t + a * (np.sin(arg) + np.sin(TWO_PI * c)) / TWO_PI
        for j in range(1, m + 1):
            out[j] = a * TWO_PI ** (j - 1) * np.cos(arg + (j - 1) * np.pi / 2)
        if m >= 1:
            out[1] += 1.0
        return out

    return SmoothFunction(jet_fn, name=f"cosine({a},{c},{t})")


def log_cosine(a: float, c: float = 0.0) -> SmoothFunction:
    """``log(1 + a cos 2pi(x - c)) - log(1 + a cos 2pi c)``: phi_1 of the cosine lift."""
    a, c = float(a), float(c)
    if not abs(a) < 1.0:
        raise DomainError(f"cosine amplitude must satisfy |a| < 1, got {a}")
    from ._jets import log_derivative_jet

    base = cosine_lift(a, c)

    def jet_fn(x, m):
        u = base.jet(x, m + 1)[1:]
        out = np.empty((m + 1, x.size))
        out[0] = np.log(u[0]) - np.log1p(a * np.cos(TWO_PI * c))
        if m:
            out[1:] = log_derivative_jet(u)
        return out

    return SmoothFunction(jet_fn, name=f"logcos({a},{c})")


INTERVAL_FAMILIES = {
    "identity": (0, lambda: identity_map()),
    "exp": (1, exp_map),
    "mobius": (1, mobius_map),
}

CIRCLE_FAMILIES = {
    "identity": (0, lambda: rotation_lift(0.0)),
    "rotation": (1, rotation_lift),
    "cosine": (3, cosine_lift),
}
