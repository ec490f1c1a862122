"""Residual checks behind ``diffgeo verify``.

Every check returns :class:`Check` rows ``(kind, k, residual, tol)``. The
identity suite compares the formal polynomials against closed-form jets of
the exp and Mobius families; the invariants suite exercises round trips,
invariance and lift normalisation on the sampled groups.
"""
from __future__ import annotations

from typing import NamedTuple

import numpy as np

from . import _jets
from .circle import circle_compose, circle_from_family, circle_invert, sigma1
from .config import K_MAX, N_DEFAULT, TOL_NUM
from .errors import DomainError
from .families import exp_inverse_map, exp_map, mobius_inverse_param, mobius_map
from .funcspace import SmoothFunction, grid
from .interval import compose, dk, from_family, from_phi1, phi
from .polyengine import build_P, build_Q, build_R, eval_poly_grid, x_assignment

Q_TOL = 1e-8
R_TOL = TOL_NUM
P_TOL = TOL_NUM

EXP_PARAMS = (-3.0, -1.0, 0.5, 2.0, 3.0)
MOBIUS_PARAMS = (-0.5, 0.7, 2.0)


class Check(NamedTuple):
    kind: str
    k: int
    residual: float
    tol: float

    @property
    def ok(self) -> bool:
        return bool(self.residual <= self.tol)


def family_pairs() -> list[tuple[SmoothFunction, SmoothFunction]]:
    """``(f, f^-1)`` with both jets in closed form."""
    out = [(exp_map(a), exp_inverse_map(a)) for a in EXP_PARAMS]
    out += [(mobius_map(t), mobius_map(mobius_inverse_param(t))) for t in MOBIUS_PARAMS]
    return out


def _rel(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.max(np.abs(a - b) / (1.0 + np.abs(b))))


def q_residual(k: int, n: int = 256) -> float:
    """``f^(k)`` against ``Q_k(f', ..., f^(k-1); phi_2, ..., phi_k)``."""
    x = grid(n)
    q = build_Q(k)
    worst = 0.0
    for f, _ in family_pairs():
        jets = f.jet(x, k)
        w = _jets.log_derivative_jet(jets[1:])
        assign = x_assignment(jets[:k])
        assign.update({f"Y{j}": w[j - 2] for j in range(2, k + 1)})
        worst = max(worst, _rel(eval_poly_grid(q, assign), jets[k]))
    return worst


def r_residual(k: int, n: int = 256) -> float:
    """``(f^-1)^(k)(f(x))`` against ``R_k(jets of f at x) / f'(x)^(2k-1)``."""
    x = grid(n)
    r = build_R(k)
    worst = 0.0
    for f, g in family_pairs():
        jets = f.jet(x, k)
        exact = g.jet(jets[0], k)[k]
        approx = eval_poly_grid(r, x_assignment(jets)) / jets[1] ** (2 * k - 1)
        worst = max(worst, _rel(approx, exact))
    return worst


def p_residual(k: int, n: int = 256) -> float:
    """``phi_k(f h^-1) - phi_k(h h^-1)`` against the ``P^k`` expansion."""
    y = grid(n)
    polys = build_P(k)
    pairs = family_pairs()
    worst = 0.0
    for i, (f, _) in enumerate(pairs):
        h, hinv = pairs[(i + 3) % len(pairs)]
        u = hinv.jet(y, k)
        x = u[0]
        direct = _jets.log_derivative_jet(_jets.compose(f.jet(x, k), u)[1:])[k - 2]
        wf = _jets.log_derivative_jet(f.jet(x, k)[1:])
        wh = _jets.log_derivative_jet(h.jet(x, k)[1:])
        assign = x_assignment(u)
        expansion = np.zeros_like(y)
        for j in range(2, k + 1):
            m = k - j + 2
            expansion += eval_poly_grid(polys[j - 2], assign) * (wf[m - 2] - wh[m - 2])
        worst = max(worst, _rel(expansion, direct))
    return worst


def identity_checks(order: int) -> list[Check]:
    if not 2 <= order <= K_MAX:
        raise DomainError(f"order must be in 2..{K_MAX}")
    out = []
    for k in range(2, order + 1):
        out.append(Check("Q", k, q_residual(k), Q_TOL))
        out.append(Check("R", k, r_residual(k), R_TOL))
        out.append(Check("P", k, p_residual(k), P_TOL))
    return out


def invariant_checks(order: int, n: int = N_DEFAULT, seed: int = 0) -> list[Check]:
    """Round trips, right-invariance of ``d_1`` and circle lift closure."""
    if not 1 <= order <= K_MAX:
        raise DomainError(f"order must be in 1..{K_MAX}")
    rng = np.random.default_rng(seed)
    out = []
    for k in range(1, order + 1):
        members = [from_family("exp", a, k, n) for a in EXP_PARAMS]
        members += [from_family("mobius", t, k, n) for t in MOBIUS_PARAMS]
        trip = max(float(np.max(np.abs(from_phi1(phi(f, 1), k).jets[: min(k, 2) + 1] - f.jets[: min(k, 2) + 1])))
                   for f in members)
        out.append(Check("phi1_roundtrip", k, trip, TOL_NUM))
    base = [from_family("exp", a, 1, n) for a in EXP_PARAMS] + [from_family("mobius", t, 1, n) for t in MOBIUS_PARAMS]
    worst = 0.0
    for _ in range(10):
        f, g, h = (base[i] for i in rng.integers(0, len(base), 3))
        worst = max(worst, abs(dk(compose(f, h), compose(g, h), 1) - dk(f, g, 1)))
    out.append(Check("d1_right_invariance", 1, worst, TOL_NUM))
    bad = 0
    for _ in range(20):
        a, c, t = rng.uniform(-0.6, 0.6), rng.uniform(0, 1), rng.uniform(0, 1)
        f = circle_from_family("cosine", (a, c, t), 1, n)
        for g in (circle_invert(f), circle_compose(f, f)):
            bad += len(g.check_invariants())
        bad += int(sigma1(circle_compose(f, circle_invert(f)), circle_from_family("identity", (), 1, n)) > TOL_NUM)
    out.append(Check("circle_lift", 1, float(bad), 0.0))
    return out


def run_suite(suite: str, order: int, n: int = N_DEFAULT, seed: int = 0) -> list[Check]:
    if suite not in ("identities", "invariants", "all"):
        raise DomainError(f"unknown suite {suite!r}")
    out = []
    if suite in ("identities", "all"):
        out += identity_checks(max(order, 2))
    if suite in ("invariants", "all"):
        out += invariant_checks(order, n, seed)
    return out


