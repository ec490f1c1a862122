"""Coarse-geometric constructions on the diffeomorphism groups.

* :func:`ob_bounds` - the quantities whose finiteness characterises relatively
  (OB) families: ``sup |log f'|`` and ``sup |f^(j)|`` for ``2 <= j <= k``.
* :func:`lipschitz_bound` - a constant ``L(h)`` with
  ``d_k(f h^-1, g h^-1) <= L(h) d_k(f, g)``.
* :func:`factor_into_ball` - write ``f = g_r o ... o g_1`` with every factor in
  the ``d_j``-ball of radius ``epsilon`` about the identity.
* :func:`geodesic_chain` - a chain from the identity to a circle map with
  steps of bounded ``sigma1`` cost.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from ._parallel import pmap
from .circle import (
    CircleDiffeo,
    circle_compose,
    circle_from,
    circle_identity,
    circle_invert,
    circle_rho,
    rotation,
    sigma1,
    stabilizer_decompose,
)
from .errors import ConvergenceError, DomainError
from .funcspace import sup_norm
from .interval import IntervalDiffeo, Phi, PhiCoords, compose, dk, from_Phi, identity, invert, phi, rho
from .polyengine import build_P, eval_poly_grid, x_assignment

Diffeo = Union[IntervalDiffeo, CircleDiffeo]

MAX_DOUBLINGS = 8


def _ops(f: Diffeo):
    if isinstance(f, CircleDiffeo):
        return circle_compose, circle_invert, lambda k, n: circle_identity(k, n), circle_rho
    return compose, invert, lambda k, n: identity(k, n), rho


# ---------------------------------------------------------------------------
# (OB) bounds


@dataclass(frozen=True)
class ObReport:
    k: int
    sup_log_deriv: float
    sup_higher: tuple[float, ...]  # index 0 is j = 2
    family_size: int

    def rows(self) -> list[tuple[int, float]]:
        return [(1, self.sup_log_deriv)] + [(j, v) for j, v in enumerate(self.sup_higher, start=2)]


def ob_bounds(family: Sequence[Diffeo], k: int) -> ObReport:
    if not family:
        raise DomainError("empty family")
    kinds = {type(f) for f in family}
    if len(kinds) > 1:
        raise DomainError("family mixes interval and circle maps")
    if any(f.order < k for f in family):
        raise DomainError(f"every member needs order >= {k}")
    log_sup = max(float(np.max(np.abs(np.log(f.jets[1])))) for f in family)
    higher = tuple(max(float(np.max(np.abs(f.jets[j]))) for f in family) for j in range(2, k + 1))
    return ObReport(k, log_sup, higher, len(family))


# ---------------------------------------------------------------------------
# translation Lipschitz constant


def lipschitz_bound(h: Diffeo, k: int) -> float:
    """Per-element Lipschitz constant of right translation by ``h^-1`` for ``d_k``.

    With ``D_m = phi_m(f) - phi_m(g)``, ``phi_m(f h^-1) - phi_m(g h^-1)`` is
    ``sum_i (D_{m-i+1} o h^-1) P^m_{i+1}``. Since ``D_p`` is recovered from
    ``Phi_k(f) - Phi_k(g)`` by ``k - p`` antiderivatives,
    ``||D_p|| <= (k - p + 1) d_k(f, g)``, which gives

        L(h) = max_{2<=m<=k} sum_{i=1}^{m-1} (k - m + i) sup |P^m_{i+1}(jets of h^-1)|.
    """
    if k < 2:
        raise DomainError("d_1 is right-invariant; the bound is only defined for k >= 2")
    if h.order < k:
        raise DomainError(f"need order >= {k}, have {h.order}")
    _, inv, _, _ = _ops(h)
    assign = x_assignment(inv(h).jets)
    best = 0.0
    for m in range(2, k + 1):
        polys = build_P(m)
        total = sum(
            (k - m + i) * float(np.max(np.abs(eval_poly_grid(polys[i - 1], assign))))
            for i in range(1, m)
        )
        best = max(best, total)
    return best


# ---------------------------------------------------------------------------
# factorisation into small balls


@dataclass
class FactorizationResult:
    """``target = g_r o ... o g_1`` (times ``rotation(t)`` on the circle).

    ``factors[i - 1]`` is ``g_i``; ``radii[i - 1] = d_j(e, g_i)``.
    """

    order: int
    epsilon: float
    factors: list
    radii: list[float]
    recomposition_error: float
    initial_r: int
    doublings: int
    rotation: float | None = None

    @property
    def r(self) -> int:
        return len(self.factors)


def _path(f: Diffeo, j: int):
    """``s -> `` the element with ``Phi_j = s * Phi_j(f)``."""
    k = f.order
    if isinstance(f, CircleDiffeo):
        F = phi(f, 1)
        return lambda s: circle_from(s * F, 0.0, k, f.n)
    coords = Phi(f, j)

    def at(s):
        scaled = PhiCoords(j, s * coords.head, tuple(s * c for c in coords.initial_values))
        return from_Phi(scaled, k)

    return at


def factor_into_ball(f: Diffeo, j: int, epsilon: float, max_doublings: int = MAX_DOUBLINGS) -> FactorizationResult:
    """Factor ``f`` into ``r`` elements of the open ``d_j``-ball of radius ``epsilon``.

    The intermediate points ``f_i`` run along the straight segment from 0 to
    ``Phi_j(f)``; ``g_i = f_i o f_{i-1}^{-1}``. The first guess for ``r`` is
    ``floor(L * d_j(f, e) / epsilon) + 1`` with ``L = 1`` for ``j = 1``
    (``d_1`` is right-invariant) and the largest :func:`lipschitz_bound` seen
    at five points of the path otherwise; ``r`` doubles until every factor
    fits. Circle maps are first split as ``rotation(t) o a_star``.
    """
    if not epsilon > 0:
        raise DomainError("epsilon must be positive")
    if not 1 <= j <= f.order:
        raise DomainError(f"order j must be in 1..{f.order}")
    rot = None
    if isinstance(f, CircleDiffeo) and not f.fixes_zero():
        rot, f = stabilizer_decompose(f)
    comp, inv, ident, metric = _ops(f)
    e = ident(f.order, f.n)
    dist = dk(f, e, j)
    if dist == 0.0:
        return FactorizationResult(j, epsilon, [e], [0.0], metric(e, f, j), 1, 0, rot)

    path = _path(f, j)
    if j == 1:
        lhat = 1.0
    else:
        lhat = max(1.0, max(lipschitz_bound(path(s), j) for s in (0.0, 0.25, 0.5, 0.75, 1.0)))
    r0 = r = int(math.floor(lhat * dist / epsilon)) + 1
    for doubling in range(max_doublings + 1):
        points = [e] + pmap(lambda i: path(i / r), range(1, r)) + [f]
        factors = pmap(lambda i: comp(points[i], inv(points[i - 1])), range(1, r + 1))
        radii = pmap(lambda g: dk(g, e, j), factors)
        if max(radii) < epsilon:
            break
        if doubling == max_doublings:
            raise ConvergenceError(
                f"factor radius {max(radii):.6g} >= epsilon={epsilon} after {max_doublings} doublings (r={r})"
            )
        r *= 2
    acc = factors[0]
    for g in factors[1:]:
        acc = comp(g, acc)
    err = metric(acc, f, j)
    return FactorizationResult(j, epsilon, factors, radii, err, r0, doubling, rot)


# ---------------------------------------------------------------------------
# large-scale geodesic chains on the circle


@dataclass
class ChainResult:
    nodes: list[CircleDiffeo]
    step_costs: list[float]
    stabilizer_steps: list[float] = field(default_factory=list)
    endpoint_error: float = 0.0

    @property
    def total_cost(self) -> float:
        return float(sum(self.step_costs))

    @property
    def n(self) -> int:
        return len(self.step_costs)


def geodesic_chain(f: CircleDiffeo, n: int | str = "auto") -> ChainResult:
    """Chain ``e = l_0, ..., l_n = f`` with ``l_i = rotation(i t / n) o h_i``.

    ``f = rotation(t) o h`` with ``h`` fixing 0, and ``h_i`` is the stabiliser
    element with ``phi_1(h_i) = (i / n) phi_1(h)``. With ``n="auto"`` the
    length is ``ceil(sigma1(e, h))`` (at least 1), so each stabiliser step
    costs about one unit.
    """
    k, grid_n = f.order, f.n
    e = circle_identity(k, grid_n)
    t, h = stabilizer_decompose(f)
    if n == "auto":
        if sigma1(e, f) == 0.0:
            return ChainResult([e], [], [], 0.0)
        n = max(1, math.ceil(sigma1(e, h)))
    n = int(n)
    if n <= 0:
        raise DomainError("chain length must be positive")
    F = phi(h, 1)
    hs = [e] + [circle_from((i / n) * F, 0.0, k, grid_n) for i in range(1, n + 1)]
    nodes = [e] + [circle_compose(rotation(i * t / n, k, grid_n), hs[i]) for i in range(1, n + 1)]
    steps = [sigma1(nodes[i - 1], nodes[i]) for i in range(1, n + 1)]
    hsteps = [sigma1(hs[i - 1], hs[i]) for i in range(1, n + 1)]
    return ChainResult(nodes, steps, hsteps, sigma1(nodes[-1], f))


# ---------------------------------------------------------------------------
# embedding and boundedness reports


def embedding_report(pairs: Sequence[tuple[IntervalDiffeo, IntervalDiffeo]]) -> list[tuple[float, float, float]]:
    """Per pair: ``(d_1(f, g), ||Phi_1(f) - Phi_1(g)||, |difference|)``."""
    out = []
    for f, g in pairs:
        d1 = dk(f, g, 1)
        norm = sup_norm(phi(f, 1) - phi(g, 1), refine=True)
        out.append((d1, norm, abs(d1 - norm)))
    return out


def boundedness_sweep(members: Sequence[Diffeo], k: int, deltas: Sequence[float]) -> list[tuple[float, int, float, float]]:
    """For each ``delta``: ``(delta, count, max rho_k(f, e), max rho_k(f^-1, e))``
    over the members with ``d_k(f, e) <= delta``."""
    if not members:
        raise DomainError("empty family")
    comp, inv, ident, metric = _ops(members[0])
    e = ident(members[0].order, members[0].n)
    dists = pmap(lambda f: dk(f, e, k), members)
    fwd = pmap(lambda f: metric(f, e, k), members)
    back = pmap(lambda f: metric(inv(f), e, k), members)
    rows = []
    for delta in sorted(deltas):
        sel = [i for i, d in enumerate(dists) if d <= delta]
        rows.append((
            float(delta),
            len(sel),
            max((fwd[i] for i in sel), default=0.0),
            max((back[i] for i in sel), default=0.0),
        ))
    return rows
