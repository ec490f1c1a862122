"""Sampled real functions on [0, 1].

A :class:`GridFunction` holds samples on the uniform grid ``x_i = i / N`` and,
optionally, samples of its first few derivatives. Derivative samples are used
both for interpolation (Hermite) and for quadrature (corrected trapezoid
panels), which keeps composition and integration errors far below the
tolerances used by the metric code.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from numpy.polynomial import polynomial as npoly

from .errors import DomainError, InvariantError

# grid coordinates closer than this (in units of h) to a node snap onto it
_NODE_SNAP = 1e-9
_REFINE_SAMPLES = 65
_REFINE_CANDIDATES = 8


def grid(n: int) -> np.ndarray:
    return np.arange(n + 1, dtype=float) / n


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Samples of a function (and optionally its derivatives) on ``N + 1`` nodes.

    Parameters
    ----------
    values : array of shape (N + 1,)
    derivs : array of shape (m, N + 1), optional
        ``derivs[j - 1]`` holds the ``j``-th derivative at the nodes.
    """

    values: np.ndarray
    derivs: np.ndarray = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.ndim != 1 or values.size < 2:
            raise InvariantError("values must be a 1-d array with at least 2 entries")
        if self.derivs is None:
            derivs = np.empty((0, values.size))
        else:
            derivs = np.array(self.derivs, dtype=float)
            if derivs.ndim == 1:
                derivs = derivs[None, :]
            if derivs.shape[1:] != values.shape:
                raise InvariantError("every derivative row needs N + 1 entries")
        if not (np.all(np.isfinite(values)) and np.all(np.isfinite(derivs))):
            raise InvariantError("samples must be finite")
        values.setflags(write=False)
        derivs.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "derivs", derivs)

    @property
    def n(self) -> int:
        return self.values.size - 1

    @property
    def order(self) -> int:
        """Highest derivative order stored."""
        return self.derivs.shape[0]

    @property
    def rows(self) -> np.ndarray:
        return np.vstack([self.values[None, :], self.derivs])

    @property
    def nodes(self) -> np.ndarray:
        return grid(self.n)

    @classmethod
    def from_rows(cls, rows: np.ndarray) -> "GridFunction":
        rows = np.asarray(rows, dtype=float)
        return cls(rows[0], rows[1:])

    def truncate(self, order: int) -> "GridFunction":
        return GridFunction(self.values, self.derivs[:order])

    def __call__(self, x):
        return evaluate(self, x)

    def _combine(self, other, op):
        if isinstance(other, GridFunction):
            if other.n != self.n:
                raise DomainError("grid functions live on different grids")
            m = min(self.order, other.order)
            return GridFunction(op(self.values, other.values), op(self.derivs[:m], other.derivs[:m]))
        other = float(other)
        return GridFunction(op(self.values, other), op(self.derivs, 0.0))

    def __add__(self, other):
        return self._combine(other, np.add)

    __radd__ = __add__

    def __sub__(self, other):
        return self._combine(other, np.subtract)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return GridFunction(-self.values, -self.derivs)

    def __mul__(self, scalar):
        scalar = float(scalar)
        return GridFunction(scalar * self.values, scalar * self.derivs)

    __rmul__ = __mul__

    def to_dict(self) -> dict:
        out = {"n": self.n, "values": self.values.tolist()}
        if self.order:
            out["derivs"] = self.derivs.tolist()
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "GridFunction":
        gf = cls(data["values"], data.get("derivs"))
        if gf.n != int(data["n"]):
            raise InvariantError(f"declared n={data['n']} but {gf.values.size} samples given")
        return gf


@dataclass(frozen=True)
class SmoothFunction:
    """Closed-form function on [0, 1] that can report exact jets.

    ``jet_fn(x, m)`` must return an array of shape ``(m + 1, len(x))`` whose
    row ``j`` is the ``j``-th derivative at ``x``.
    """

    jet_fn: Callable[[np.ndarray, int], np.ndarray]
    max_order: int = 32
    name: str = "smooth"

    def jet(self, x, m: int) -> np.ndarray:
        if m > self.max_order:
            raise DomainError(f"{self.name} only provides jets up to order {self.max_order}")
        x = np.atleast_1d(np.asarray(x, dtype=float))
        out = np.asarray(self.jet_fn(x, m), dtype=float)
        if out.shape != (m + 1, x.size):
            raise InvariantError(f"{self.name}: jet has shape {out.shape}, expected {(m + 1, x.size)}")
        if not np.all(np.isfinite(out)):
            raise InvariantError(f"{self.name}: non-finite jet")
        return out

    def __call__(self, x):
        return self.jet(x, 0)[0]

    def sample(self, n: int, order: int = 0) -> GridFunction:
        return GridFunction.from_rows(self.jet(grid(n), order))

    def __mul__(self, scalar):
        scalar = float(scalar)
        return SmoothFunction(lambda x, m: scalar * self.jet_fn(x, m), self.max_order, f"{scalar}*{self.name}")

    __rmul__ = __mul__

    @staticmethod
    def polynomial(coefs: Sequence[float]) -> "SmoothFunction":
        """``sum_i coefs[i] * x**i``."""
        c = np.asarray(coefs, dtype=float)

        def jet_fn(x, m):
            rows, cur = [], c
            for _ in range(m + 1):
                rows.append(npoly.polyval(x, cur) if cur.size else np.zeros_like(x))
                cur = npoly.polyder(cur) if cur.size > 1 else np.zeros(1)
            return np.array(rows)

        return SmoothFunction(jet_fn, name=f"poly{tuple(c.tolist())}")

    @staticmethod
    def linear(a: float) -> "SmoothFunction":
        return SmoothFunction.polynomial([0.0, a])

    @staticmethod
    def sine(freq: float, amp: float = 1.0, phase: float = 0.0) -> "SmoothFunction":
        """``amp * sin(freq * x + phase)``."""

        def jet_fn(x, m):
            return np.array([amp * freq**j * np.sin(freq * x + phase + j * np.pi / 2) for j in range(m + 1)])

        return SmoothFunction(jet_fn, name=f"sine({freq},{amp},{phase})")


# ---------------------------------------------------------------------------
# interpolation


def _locate(y: np.ndarray, n: int):
    u = y * n
    near = np.rint(u)
    u = np.where(np.abs(u - near) < _NODE_SNAP, near, u)
    idx = np.clip(np.floor(u), 0, n - 1).astype(int)
    return idx, u - idx, u


def _interp_row(rows: np.ndarray, j: int, y: np.ndarray) -> np.ndarray:
    """Interpolate row ``j`` using up to two further derivative rows."""
    n = rows.shape[1] - 1
    h = 1.0 / n
    idx, t, u = _locate(y, n)
    extra = rows.shape[0] - 1 - j
    p0, p1 = rows[j, idx], rows[j, idx + 1]
    if extra >= 2:
        d0, d1 = rows[j + 1, idx], rows[j + 1, idx + 1]
        s0, s1 = rows[j + 2, idx], rows[j + 2, idx + 1]
        t2, t3 = t * t, t * t * t
        t4, t5 = t3 * t, t3 * t2
        return (
            (1 - 10 * t3 + 15 * t4 - 6 * t5) * p0
            + (t - 6 * t3 + 8 * t4 - 3 * t5) * h * d0
            + 0.5 * (t2 - 3 * t3 + 3 * t4 - t5) * h * h * s0
            + (10 * t3 - 15 * t4 + 6 * t5) * p1
            + (-4 * t3 + 7 * t4 - 3 * t5) * h * d1
            + 0.5 * (t3 - 2 * t4 + t5) * h * h * s1
        )
    if extra == 1:
        d0, d1 = rows[j + 1, idx], rows[j + 1, idx + 1]
        t2, t3 = t * t, t * t * t
        return (
            (2 * t3 - 3 * t2 + 1) * p0
            + (t3 - 2 * t2 + t) * h * d0
            + (-2 * t3 + 3 * t2) * p1
            + (t3 - t2) * h * d1
        )
    if n < 3:
        return (1 - t) * p0 + t * p1
    base = np.clip(idx - 1, 0, n - 3)
    s = u - base
    f = [rows[j, base + q] for q in range(4)]
    return (
        -(s - 1) * (s - 2) * (s - 3) / 6 * f[0]
        + s * (s - 2) * (s - 3) / 2 * f[1]
        - s * (s - 1) * (s - 3) / 2 * f[2]
        + s * (s - 1) * (s - 2) / 6 * f[3]
    )


def interpolate_rows(rows: np.ndarray, y, upto: int | None = None) -> np.ndarray:
    """Interpolate every derivative row of a jet grid at the points ``y``.

    Row ``j`` is interpolated with quintic Hermite when rows ``j+1, j+2``
    exist, cubic Hermite when only ``j+1`` does, and a four-point cubic
    otherwise. ``y`` is not range-checked here.
    """
    rows = np.asarray(rows, dtype=float)
    y = np.atleast_1d(np.asarray(y, dtype=float))
    top = rows.shape[0] - 1 if upto is None else upto
    return np.array([_interp_row(rows, j, y) for j in range(top + 1)])


def evaluate(f: GridFunction, x):
    """Value of the interpolant of ``f`` at ``x``; exact at nodes."""
    xa = np.asarray(x, dtype=float)
    if np.any(~np.isfinite(xa)) or np.any(xa < 0.0) or np.any(xa > 1.0):
        raise DomainError(f"evaluation point outside [0, 1]: {x!r}")
    out = _interp_row(f.rows, 0, np.atleast_1d(xa))
    return float(out[0]) if xa.ndim == 0 else out


# ---------------------------------------------------------------------------
# norms


def refined_max(f: GridFunction, transform: Callable[[np.ndarray], np.ndarray] = np.abs) -> float:
    """Max of ``transform(f)`` with sub-grid search around the best nodes.

    The node-wise maximum can miss an interior peak by O(h^2). The few
    largest discrete local maxima are re-examined by densely sampling the
    interpolant on their two adjacent cells.
    """
    v = transform(f.values)
    best = float(np.max(v))
    left = np.concatenate([[-np.inf], v[:-1]])
    right = np.concatenate([v[1:], [-np.inf]])
    peaks = np.flatnonzero((v >= left) & (v >= right))
    peaks = peaks[np.argsort(-v[peaks], kind="stable")][:_REFINE_CANDIDATES]
    n = f.n
    rows = f.rows
    for i in peaks:
        lo, hi = max(i - 1, 0) / n, min(i + 1, n) / n
        ys = np.linspace(lo, hi, _REFINE_SAMPLES)
        best = max(best, float(np.max(transform(_interp_row(rows, 0, ys)))))
    return best


def sup_norm(f: GridFunction, refine: bool = False) -> float:
    """Supremum norm of ``f``.

    By default this is the maximum of ``|values|`` over the nodes, a lower
    bound for the true supremum that is exact when the maximum sits on a node.
    With ``refine=True`` the interpolant is searched near the largest nodes.
    """
    if refine:
        return refined_max(f, np.abs)
    return float(np.max(np.abs(f.values)))


def ck_norm(f: GridFunction, k: int | None = None) -> float:
    """Sum of node-wise sup norms of the stored rows up to order ``k``."""
    rows = f.rows if k is None else f.rows[: k + 1]
    return float(sum(np.max(np.abs(r)) for r in rows))


# ---------------------------------------------------------------------------
# integration and differentiation


def _panel_integrals(rows: np.ndarray) -> np.ndarray:
    """Integral over each cell ``[x_i, x_{i+1}]``; shape (N,)."""
    n = rows.shape[1] - 1
    h = 1.0 / n
    f = rows[0]
    if rows.shape[0] >= 3:
        d, s = rows[1], rows[2]
        return (
            h / 2 * (f[:-1] + f[1:])
            + h * h / 10 * (d[:-1] - d[1:])
            + h**3 / 120 * (s[:-1] + s[1:])
        )
    if rows.shape[0] == 2:
        d = rows[1]
        return h / 2 * (f[:-1] + f[1:]) + h * h / 12 * (d[:-1] - d[1:])
    raise ValueError("panel rule needs derivative samples")


def _cumulative_simpson(f: np.ndarray) -> np.ndarray:
    """Composite Simpson at even nodes; odd nodes use the half-panel rule."""
    n = f.size - 1
    h = 1.0 / n
    out = np.zeros(n + 1)
    pairs = h / 3 * (f[0:n - 1:2] + 4 * f[1:n:2] + f[2:n + 1:2])
    out[2::2] = np.cumsum(pairs)
    # odd node 2m+1: quadratic through nodes 2m, 2m+1, 2m+2 on the first half
    odd = np.arange(1, n + 1, 2)
    inner = odd[odd + 1 <= n]
    out[inner] = out[inner - 1] + h / 12 * (5 * f[inner - 1] + 8 * f[inner] - f[inner + 1])
    if n % 2 == 1:
        out[n] = out[n - 1] + h / 12 * (-f[n - 2] + 8 * f[n - 1] + 5 * f[n])
    return out


def cumulative_integral(rows: np.ndarray) -> np.ndarray:
    """``x_i -> int_0^{x_i} f`` from a jet grid (row 0 is ``f``)."""
    rows = np.atleast_2d(np.asarray(rows, dtype=float))
    if rows.shape[1] < 3:
        raise DomainError("integration needs at least 3 nodes")
    if rows.shape[0] == 1:
        return _cumulative_simpson(rows[0])
    out = np.zeros(rows.shape[1])
    out[1:] = np.cumsum(_panel_integrals(rows))
    return out


def antiderivative(f: GridFunction, b: float = 0.0) -> GridFunction:
    """``x -> int_0^x f(t) dt + b``.

    The result carries one more derivative row than ``f`` (its first
    derivative is ``f`` itself) and equals ``b`` exactly at ``x = 0``.
    """
    if f.values.size < 3:
        raise DomainError("antiderivative needs at least 3 nodes")
    values = cumulative_integral(f.rows) + b
    values[0] = b
    return GridFunction(values, f.rows)


def iota(f: GridFunction) -> GridFunction:
    return antiderivative(f, 0.0)


def finite_difference_derivative(f: GridFunction) -> GridFunction:
    """Fourth-order finite-difference derivative of the sampled values.

    Central five-point stencil inside, one-sided five-point stencils on the
    two nodes nearest each end. Exact for polynomials of degree <= 4.
    """
    n = f.n
    if n < 4:
        raise DomainError("finite differences need N >= 4")
    v = f.values
    h = 1.0 / n
    d = np.empty_like(v)
    d[2:-2] = (v[:-4] - 8 * v[1:-3] + 8 * v[3:-1] - v[4:]) / (12 * h)
    d[0] = (-25 * v[0] + 48 * v[1] - 36 * v[2] + 16 * v[3] - 3 * v[4]) / (12 * h)
    d[1] = (-3 * v[0] - 10 * v[1] + 18 * v[2] - 6 * v[3] + v[4]) / (12 * h)
    d[-1] = (25 * v[-1] - 48 * v[-2] + 36 * v[-3] - 16 * v[-4] + 3 * v[-5]) / (12 * h)
    d[-2] = (3 * v[-1] + 10 * v[-2] - 18 * v[-3] + 6 * v[-4] - v[-5]) / (12 * h)
    return GridFunction(d)
