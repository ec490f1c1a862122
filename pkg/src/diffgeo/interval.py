"""Orientation-preserving C^k diffeomorphisms of [0, 1] on a jet grid.

An :class:`IntervalDiffeo` stores ``f, f', ..., f^(k)`` at ``N + 1`` uniform
nodes. The coordinates used throughout are

* ``phi_1(f) = log f' - log f'(0)``, a function vanishing at 0;
* ``phi_j(f) = phi_1(f)^(j - 1)`` for ``j >= 2`` (so ``phi_2 = f''/f'``);
* ``Phi_k(f) = (phi_k(f), phi_{k-1}(f)(0), ..., phi_2(f)(0))``

and ``d_k(f, g) = ||Phi_k(f) - Phi_k(g)||`` with the max of the sup norm of
the function part and the absolute values of the scalar part.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

import numpy as np

from . import _jets
from .config import DPOS_MIN, K_MAX, N_DEFAULT, TOL_EXACT, TOL_ROOT
from .errors import DomainError, InvariantError
from .families import INTERVAL_FAMILIES
from .funcspace import GridFunction, SmoothFunction, antiderivative, cumulative_integral, grid, interpolate_rows, sup_norm
from .polyengine import build_R, eval_poly_grid, x_assignment
from .rootfind import solve_increasing

PhiSource = Union[SmoothFunction, GridFunction]


@dataclass(frozen=True, eq=False)
class IntervalDiffeo:
    """Jet grid of ``f`` in Diff_+^k([0, 1]).

    ``jets`` has shape ``(k + 1, N + 1)``; row ``j`` is ``f^(j)`` at the nodes.
    """

    jets: np.ndarray
    family: dict | None = field(default=None)

    manifold = "interval"

    def __post_init__(self):
        jets = np.array(self.jets, dtype=float)
        if jets.ndim != 2 or jets.shape[0] < 2 or jets.shape[1] < 5:
            raise InvariantError("jets must have shape (k + 1, N + 1) with k >= 1, N >= 4")
        jets.setflags(write=False)
        object.__setattr__(self, "jets", jets)
        problems = self.check_invariants()
        if problems:
            raise InvariantError("; ".join(problems))

    def check_invariants(self) -> list[str]:
        j = self.jets
        out = []
        if not np.all(np.isfinite(j)):
            out.append("non-finite jets")
        if j[0, 0] != 0.0 or j[0, -1] != 1.0:
            out.append(f"endpoints not fixed: f(0)={j[0, 0]!r}, f(1)={j[0, -1]!r}")
        if np.min(j[1]) < DPOS_MIN:
            out.append(f"f' drops to {np.min(j[1]):.3g} < {DPOS_MIN}")
        if np.any(np.diff(j[0]) <= 0):
            out.append("values not strictly increasing")
        return out

    @property
    def order(self) -> int:
        return self.jets.shape[0] - 1

    @property
    def n(self) -> int:
        return self.jets.shape[1] - 1

    @property
    def values(self) -> np.ndarray:
        return self.jets[0]

    @property
    def nodes(self) -> np.ndarray:
        return grid(self.n)

    def truncate(self, k: int) -> "IntervalDiffeo":
        if k > self.order:
            raise DomainError(f"cannot raise order {self.order} to {k}")
        return IntervalDiffeo(self.jets[: k + 1], self.family)

    def __call__(self, x):
        return interpolate_rows(self.jets, x, upto=0)[0]

    def to_dict(self) -> dict:
        out = {"manifold": "interval", "order": self.order, "n": self.n, "jets": self.jets.T.tolist()}
        if self.family is not None:
            out["family"] = self.family
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "IntervalDiffeo":
        if data.get("manifold", "interval") != "interval":
            raise DomainError(f"expected an interval diffeomorphism, got {data.get('manifold')!r}")
        jets = np.array(data["jets"], dtype=float).T
        f = cls(jets, data.get("family"))
        if f.order != int(data["order"]) or f.n != int(data["n"]):
            raise InvariantError("declared order/n do not match the jets")
        return f


def _fix_endpoints(rows: np.ndarray) -> np.ndarray:
    rows = np.array(rows, dtype=float)
    rows[0, 0] = 0.0
    rows[0, -1] = 1.0
    return rows


@dataclass(frozen=True, eq=False)
class PhiCoords:
    """``Phi_k(f)``: the function ``phi_k(f)`` and ``(phi_{k-1}(f)(0), ..., phi_2(f)(0))``.

    For ``k = 1`` the head is ``phi_1(f)``.
    """

    order: int
    head: GridFunction
    initial_values: tuple[float, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "initial_values", tuple(float(v) for v in self.initial_values))
        if len(self.initial_values) != max(self.order - 2, 0):
            raise InvariantError(f"Phi_{self.order} needs {max(self.order - 2, 0)} initial values")
        if self.order == 1 and abs(self.head.values[0]) > TOL_EXACT:
            raise InvariantError("phi_1 must vanish at 0")

    def __sub__(self, other: "PhiCoords") -> "PhiCoords":
        if self.order != other.order:
            raise DomainError("coordinates of different orders")
        return PhiCoords(
            self.order,
            self.head - other.head,
            tuple(a - b for a, b in zip(self.initial_values, other.initial_values)),
        )

    def norm(self, refine: bool = True) -> float:
        parts = [sup_norm(self.head, refine=refine)]
        parts.extend(abs(v) for v in self.initial_values)
        return max(parts)

    def to_dict(self) -> dict:
        return {"order": self.order, "head": self.head.to_dict(), "initial_values": list(self.initial_values)}


# ---------------------------------------------------------------------------
# construction


def identity(k: int = 1, n: int = N_DEFAULT) -> IntervalDiffeo:
    return from_family("identity", (), k, n)


def from_smooth(fn: SmoothFunction, k: int, n: int = N_DEFAULT, family: dict | None = None) -> IntervalDiffeo:
    return IntervalDiffeo(_fix_endpoints(fn.jet(grid(n), k)), family)


def from_family(name: str, params=(), k: int = 1, n: int = N_DEFAULT) -> IntervalDiffeo:
    """Sample one of the closed-form families: ``identity``, ``exp`` (a), ``mobius`` (t)."""
    if name not in INTERVAL_FAMILIES:
        raise DomainError(f"unknown interval family {name!r}; choose from {sorted(INTERVAL_FAMILIES)}")
    if not 1 <= k <= K_MAX:
        raise DomainError(f"order must be in 1..{K_MAX}")
    arity, builder = INTERVAL_FAMILIES[name]
    params = tuple(float(p) for p in np.atleast_1d(params)) if arity else ()
    if len(params) != arity:
        raise DomainError(f"family {name!r} takes {arity} parameter(s)")
    fn = builder(*params)
    tag = {"name": name, "params": list(params)}
    try:
        return from_smooth(fn, k, n, tag)
    except InvariantError as exc:
        raise DomainError(f"{name}{params} is not a diffeomorphism: {exc}") from exc


# ---------------------------------------------------------------------------
# phi maps


def log_derivative_rows(jets: np.ndarray) -> np.ndarray:
    """``phi_2, ..., phi_k`` at the nodes from the jets ``f, f', ..., f^(k)``."""
    return _jets.log_derivative_jet(jets[1:])


def phi_from_jets(jets: np.ndarray, j: int) -> GridFunction:
    k = jets.shape[0] - 1
    if not 1 <= j <= k:
        raise DomainError(f"phi_{j} needs order >= {j}, have {k}")
    w = log_derivative_rows(jets)
    if j == 1:
        logd = np.log(jets[1])
        return GridFunction(logd - logd[0], w)
    return GridFunction(w[j - 2], w[j - 1:])


def phi(f, j: int) -> GridFunction:
    """``phi_j(f)`` carrying derivative samples up to ``phi_k(f)``."""
    return phi_from_jets(f.jets, j)


def Phi(f, k: int) -> PhiCoords:
    if k > f.order:
        raise DomainError(f"Phi_{k} needs order >= {k}, have {f.order}")
    if k <= 2:
        return PhiCoords(k, phi(f, k))
    w = log_derivative_rows(f.jets)
    head = GridFunction(w[k - 2], w[k - 1:])
    initial = tuple(w[m - 2][0] for m in range(k - 1, 1, -1))
    return PhiCoords(k, head, initial)


def _phi1_rows(F: PhiSource, k: int, n: int) -> np.ndarray:
    """Rows ``F, F', ...`` on the grid, at least ``k - 1`` derivatives."""
    if isinstance(F, GridFunction):
        if F.n != n:
            raise DomainError(f"F lives on N={F.n}, requested N={n}")
        if F.order < k - 1:
            raise DomainError(f"F carries {F.order} derivatives, order {k} needs {k - 1}")
        return F.rows
    # two extra rows let the quadrature use its high-order panel rule
    return F.jet(grid(n), max(k - 1, min(2, F.max_order)))


def integrate_exp(F: PhiSource, k: int, n: int) -> tuple[np.ndarray, float]:
    """Jets of ``x -> int_0^x exp(F)`` up to order ``k`` (unnormalised) and the total."""
    rows = _phi1_rows(F, k, n)
    if abs(rows[0, 0]) > TOL_EXACT:
        raise DomainError(f"F(0) = {rows[0, 0]:.3g}; F must vanish at 0")
    u = _jets.exp_jet(rows)
    prim = cumulative_integral(u[:3])
    out = np.empty((k + 1, n + 1))
    out[0] = prim
    out[1:] = u[:k]
    return out, float(prim[-1])


def from_phi1(F: PhiSource, k: int = 1, n: int | None = None) -> IntervalDiffeo:
    """Inverse of ``phi_1``: ``f(x) = (1/C) int_0^x exp(F)``, ``C = int_0^1 exp(F)``."""
    if n is None:
        if not isinstance(F, GridFunction):
            n = N_DEFAULT
        else:
            n = F.n
    rows, total = integrate_exp(F, k, n)
    return IntervalDiffeo(_fix_endpoints(rows / total))


def phi1_from_Phi(coords: PhiCoords) -> GridFunction:
    """Undo the derivatives: rebuild ``phi_1`` from ``Phi_k`` by antiderivatives."""
    k = coords.order
    cur = coords.head
    if k == 1:
        return cur
    # initial_values run phi_{k-1}(0), ..., phi_2(0): peel one order per value
    for c in coords.initial_values:
        cur = antiderivative(cur, c)
    return antiderivative(cur, 0.0)


def from_Phi(coords: PhiCoords, k: int | None = None) -> IntervalDiffeo:
    """``Phi_k^{-1}``; the result has order ``k`` (default ``coords.order``)."""
    k = coords.order if k is None else k
    F = phi1_from_Phi(coords)
    return from_phi1(F, k, F.n)


# ---------------------------------------------------------------------------
# group operations


def compose_rows(frows: np.ndarray, grows: np.ndarray, at: np.ndarray | None = None) -> np.ndarray:
    """Jets of ``f o g`` given jet grids of both; ``at`` overrides ``g``'s values for lookup."""
    y = grows[0] if at is None else at
    outer = interpolate_rows(frows, y)
    return _jets.compose(outer, grows)


def compose(f: IntervalDiffeo, g: IntervalDiffeo) -> IntervalDiffeo:
    """``f o g``."""
    if f.order != g.order or f.n != g.n:
        raise DomainError("compose needs equal orders and grids")
    return IntervalDiffeo(_fix_endpoints(compose_rows(f.jets, g.jets)))


def inverse_jets_at(frows_at_y: np.ndarray, k: int) -> np.ndarray:
    """Jets of ``f^{-1}`` at ``x = f(y)`` from jets of ``f`` at ``y``."""
    out = np.empty((k + 1, frows_at_y.shape[1]))
    d1 = frows_at_y[1]
    assign = x_assignment(frows_at_y)
    for j in range(1, k + 1):
        out[j] = eval_poly_grid(build_R(j), assign) / d1 ** (2 * j - 1)
    return out


def invert(f: IntervalDiffeo) -> IntervalDiffeo:
    """``f^{-1}`` by safeguarded Newton on the interpolant, jets from ``R_j``."""
    x = f.nodes
    vals = f.values
    cell = np.clip(np.searchsorted(vals, x, side="right") - 1, 0, f.n - 1)
    lo, hi = x[cell], x[cell + 1]
    vlo, vhi = vals[cell], vals[cell + 1]
    guess = lo + (x - vlo) / (vhi - vlo) * (hi - lo)
    rows = f.jets

    def fun(y):
        r = interpolate_rows(rows, y, upto=1)
        return r[0], r[1]

    y = solve_increasing(fun, x, lo, hi, guess, tol=TOL_ROOT)
    y[0], y[-1] = 0.0, 1.0
    at = interpolate_rows(rows, y)
    out = inverse_jets_at(at, f.order)
    out[0] = y
    return IntervalDiffeo(_fix_endpoints(out))


# ---------------------------------------------------------------------------
# metrics


def rho(f: IntervalDiffeo, g: IntervalDiffeo, k: int) -> float:
    """``sup |f - g| + sum_{j<=k} ||f^(j) - g^(j)||`` over the nodes."""
    if k > min(f.order, g.order):
        raise DomainError(f"rho_{k} needs order >= {k}")
    diff = np.abs(f.jets[: k + 1] - g.jets[: k + 1])
    return float(np.sum(np.max(diff, axis=1)))


def dk(f, g, k: int, refine: bool = True) -> float:
    """``d_k(f, g) = ||Phi_k(f) - Phi_k(g)||``."""
    return (Phi(f, k) - Phi(g, k)).norm(refine=refine)
