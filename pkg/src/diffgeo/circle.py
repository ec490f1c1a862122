"""Diff_+^k of the circle, represented through normalised lifts.

The circle is ``[0, 1]`` with ``0 ~ 1``. A circle diffeomorphism ``f`` is
stored as the jets of its lift ``F`` on the nodes of ``[0, 1]``, normalised
so that ``F(0)`` lies in ``[0, 1)`` and ``F(1) = F(0) + 1``; the lift on the
rest of the line is ``F(x + m) = F(x) + m``.

``phi``, ``Phi`` and ``d_k`` are computed from the lift jets with the same
formulas as on the interval. On the circle ``d_k`` is only a pseudometric:
every rotation sits at distance 0 from the identity. ``sigma1`` adds the
uniform chordal distance and is a genuine right-invariant metric.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _jets
from .config import DPOS_MIN, K_MAX, N_DEFAULT, TOL_EXACT, TOL_ROOT
from .errors import DomainError, InvariantError
from .families import CIRCLE_FAMILIES, rotation_lift
from .funcspace import GridFunction, grid, interpolate_rows, refined_max
from .interval import PhiSource, Phi, dk, integrate_exp, inverse_jets_at, phi
from .rootfind import solve_increasing

# lift values this close to an integer are treated as that integer
_WRAP_SNAP = 1e-12


def wrap(x):
    """Reduce to ``[0, 1)``; the single mod-1 routine used by this module."""
    x = np.asarray(x, dtype=float)
    fl = np.floor(x)
    frac = x - fl
    frac = np.where((frac < _WRAP_SNAP) | (frac > 1.0 - _WRAP_SNAP), 0.0, frac)
    return frac if frac.ndim else float(frac)


def _floor_snapped(x: float) -> float:
    return float(np.floor(x + _WRAP_SNAP))


def circle_distance(x, y):
    """Chordal distance ``|e^{2 pi i x} - e^{2 pi i y}| = 2 |sin(pi (x - y))|``."""
    return 2.0 * np.abs(np.sin(np.pi * (np.asarray(x, dtype=float) - np.asarray(y, dtype=float))))


@dataclass(frozen=True, eq=False)
class CircleDiffeo:
    """Normalised lift jets of ``f`` in Diff_+^k(S^1); shape ``(k + 1, N + 1)``."""

    jets: np.ndarray
    family: dict | None = field(default=None)

    manifold = "circle"

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
        if not 0.0 <= j[0, 0] < 1.0:
            out.append(f"lift(0) = {j[0, 0]!r} not in [0, 1)")
        if j[0, -1] != j[0, 0] + 1.0:
            out.append("lift(1) != lift(0) + 1")
        if np.min(j[1]) < DPOS_MIN:
            out.append(f"lift' drops to {np.min(j[1]):.3g} < {DPOS_MIN}")
        if np.any(np.diff(j[0]) <= 0):
            out.append("lift not strictly increasing")
        gap = np.abs(j[1:, -1] - j[1:, 0]) / (1.0 + np.abs(j[1:, 0]))
        if np.any(gap > TOL_EXACT):
            out.append(f"derivatives not periodic (relative gap {np.max(gap):.3g})")
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

    def lift_rows_at(self, y) -> np.ndarray:
        """Jets of the lift at arbitrary real ``y`` via periodic extension."""
        y = np.atleast_1d(np.asarray(y, dtype=float))
        shift = np.floor(y)
        rows = interpolate_rows(self.jets, y - shift)
        rows[0] += shift
        return rows

    def __call__(self, x):
        """The circle map on representatives in ``[0, 1)``."""
        return wrap(self.lift_rows_at(x)[0])

    def fixes_zero(self, tol: float = TOL_EXACT) -> bool:
        return self.jets[0, 0] <= tol

    def truncate(self, k: int) -> "CircleDiffeo":
        if k > self.order:
            raise DomainError(f"cannot raise order {self.order} to {k}")
        return CircleDiffeo(self.jets[: k + 1], self.family)

    def to_dict(self) -> dict:
        out = {"manifold": "circle", "order": self.order, "n": self.n, "jets": self.jets.T.tolist()}
        if self.family is not None:
            out["family"] = self.family
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "CircleDiffeo":
        if data.get("manifold") != "circle":
            raise DomainError(f"expected a circle diffeomorphism, got {data.get('manifold')!r}")
        f = cls(np.array(data["jets"], dtype=float).T, data.get("family"))
        if f.order != int(data["order"]) or f.n != int(data["n"]):
            raise InvariantError("declared order/n do not match the jets")
        return f


def _normalise(rows: np.ndarray) -> np.ndarray:
    """Shift by an integer so lift(0) is in [0, 1), then close up exactly."""
    rows = np.array(rows, dtype=float)
    rows[0] -= _floor_snapped(rows[0, 0])
    if abs(rows[0, 0]) < _WRAP_SNAP:
        rows[0, 0] = 0.0
    rows[0, -1] = rows[0, 0] + 1.0
    gap = np.abs(rows[1:, -1] - rows[1:, 0]) / (1.0 + np.abs(rows[1:, 0]))
    if np.all(gap <= TOL_EXACT):
        rows[1:, -1] = rows[1:, 0]
    return rows


# ---------------------------------------------------------------------------
# construction


def rotation(t: float, k: int = 1, n: int = N_DEFAULT) -> CircleDiffeo:
    t = wrap(t)
    return CircleDiffeo(_normalise(rotation_lift(t).jet(grid(n), k)), {"name": "rotation", "params": [t]})


def circle_identity(k: int = 1, n: int = N_DEFAULT) -> CircleDiffeo:
    return rotation(0.0, k, n)


def circle_from_family(name: str, params=(), k: int = 1, n: int = N_DEFAULT) -> CircleDiffeo:
    """``identity``, ``rotation`` (t) or ``cosine`` (a, c, t)."""
    if name not in CIRCLE_FAMILIES:
        raise DomainError(f"unknown circle family {name!r}; choose from {sorted(CIRCLE_FAMILIES)}")
    if not 1 <= k <= K_MAX:
        raise DomainError(f"order must be in 1..{K_MAX}")
    arity, builder = CIRCLE_FAMILIES[name]
    params = tuple(float(p) for p in np.atleast_1d(params)) if arity else ()
    if name == "cosine" and 1 <= len(params) < 3:
        params = params + (0.0,) * (3 - len(params))
    if len(params) != arity:
        raise DomainError(f"family {name!r} takes {arity} parameter(s)")
    if name == "rotation":
        return rotation(params[0], k, n)
    fn = builder(*params)
    try:
        return CircleDiffeo(_normalise(fn.jet(grid(n), k)), {"name": name, "params": list(params)})
    except InvariantError as exc:
        raise DomainError(f"{name}{params} is not a circle diffeomorphism: {exc}") from exc


def circle_from(F: PhiSource, t: float = 0.0, k: int = 1, n: int | None = None) -> CircleDiffeo:
    """The rotation by ``t`` after the stabiliser element ``h`` with ``phi_1(h) = F``.

    ``F`` must vanish at both ends so that the lift closes up.
    """
    if n is None:
        n = F.n if isinstance(F, GridFunction) else N_DEFAULT
    end = F.values[-1] if isinstance(F, GridFunction) else float(F(1.0)[0])
    if abs(end) > TOL_EXACT:
        raise DomainError(f"F(1) = {end:.3g}; F must vanish at 1 for the lift to close")
    rows, total = integrate_exp(F, k, n)
    rows = rows / total
    rows[0, 0] = 0.0
    rows[0] += wrap(t)
    return CircleDiffeo(_normalise(rows))


# ---------------------------------------------------------------------------
# group operations


def circle_compose(f: CircleDiffeo, g: CircleDiffeo) -> CircleDiffeo:
    """``f o g`` via the lifts, renormalised."""
    if f.order != g.order or f.n != g.n:
        raise DomainError("compose needs equal orders and grids")
    outer = f.lift_rows_at(g.values)
    return CircleDiffeo(_normalise(_jets.compose(outer, g.jets)))


def circle_invert(f: CircleDiffeo) -> CircleDiffeo:
    """Inverse by monotone root finding on the periodically extended lift."""
    n = f.n
    x = f.nodes
    # extended lift on [-1, 1]: nodes -1..0 then 0..1
    ext_y = np.concatenate([x[:-1] - 1.0, x])
    ext_v = np.concatenate([f.values[:-1] - 1.0, f.values])
    cell = np.clip(np.searchsorted(ext_v, x, side="right") - 1, 0, 2 * n - 1)
    lo, hi = ext_y[cell], ext_y[cell + 1]
    vlo, vhi = ext_v[cell], ext_v[cell + 1]
    guess = lo + (x - vlo) / (vhi - vlo) * (hi - lo)

    def fun(y):
        r = f.lift_rows_at(y)
        return r[0], r[1]

    y = solve_increasing(fun, x, lo, hi, guess, tol=TOL_ROOT)
    at = f.lift_rows_at(y)
    out = inverse_jets_at(at, f.order)
    out[0] = y
    out[0, -1] = out[0, 0] + 1.0
    return CircleDiffeo(_normalise(out))


def stabilizer_decompose(a: CircleDiffeo) -> tuple[float, CircleDiffeo]:
    """Split ``a = rotation(t) o a_star`` with ``a_star`` fixing 0.

    ``a_star = rotation(-t) o a``; subtracting ``t`` from the lift is that
    composition done exactly.
    """
    t = float(a.values[0])
    rows = np.array(a.jets)
    rows[0] = rows[0] - t
    return t, CircleDiffeo(_normalise(rows))


# ---------------------------------------------------------------------------
# coordinates and metrics

circle_phi = phi
circle_Phi = Phi
circle_dk = dk


def chordal_sup(f: CircleDiffeo, g: CircleDiffeo, refine: bool = True) -> float:
    """``sup_x d_S1(f(x), g(x))``."""
    m = min(f.order, g.order)
    diff = GridFunction.from_rows(f.jets[: m + 1] - g.jets[: m + 1])
    if not refine:
        return float(np.max(circle_distance(diff.values, 0.0)))
    return refined_max(diff, lambda v: circle_distance(v, 0.0))


def sigma1(f: CircleDiffeo, g: CircleDiffeo, refine: bool = True) -> float:
    """``sup_x d_S1(f(x), g(x)) + ||Phi_1(f) - Phi_1(g)||``."""
    return chordal_sup(f, g, refine) + dk(f, g, 1, refine)


def circle_rho(f: CircleDiffeo, g: CircleDiffeo, k: int) -> float:
    if k > min(f.order, g.order):
        raise DomainError(f"rho_{k} needs order >= {k}")
    diff = np.abs(f.jets[1: k + 1] - g.jets[1: k + 1])
    return chordal_sup(f, g, refine=False) + float(np.sum(np.max(diff, axis=1)))
