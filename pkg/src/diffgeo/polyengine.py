"""Exact multivariate polynomials and the derivative-identity families.

Variables are tags ``"X<i>"`` (``i >= 1``, the ``i``-th derivative of some
function) and ``"Y<j>"`` (``j >= 2``, the ``j``-th log-derivative coordinate).
Differentiating with respect to the underlying real variable shifts every tag
by one: ``X_i -> X_{i+1}``, ``Y_j -> Y_{j+1}``.

Three families are built by induction:

``build_Q(k)``
    ``f^(k) = Q_k(f', ..., f^(k-1), phi_2(f), ..., phi_k(f))``.
``build_R(k)``
    ``(g^-1)^(k) = [R_k(g', ..., g^(k)) / (g')^(2k-1)] o g^-1``.
``build_P(k)``
    coefficients of ``[phi_m(f) - phi_m(h)] o h^-1`` in ``phi_k(f h^-1)``,
    polynomials in the derivatives of ``h^-1``.
"""
from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping

import numpy as np

from .errors import DomainError

_TAG = re.compile(r"^([XY])(\d+)$")


def _parse(tag: str) -> tuple[str, int]:
    m = _TAG.match(tag)
    if not m:
        raise DomainError(f"bad variable tag {tag!r}")
    kind, idx = m.group(1), int(m.group(2))
    if (kind == "X" and idx < 1) or (kind == "Y" and idx < 2):
        raise DomainError(f"bad variable tag {tag!r}")
    return kind, idx


def _sort_key(tag: str):
    kind, idx = _parse(tag)
    return (kind, idx)


def shift(tag: str) -> str:
    kind, idx = _parse(tag)
    return f"{kind}{idx + 1}"


def xs(k: int) -> tuple[str, ...]:
    return tuple(f"X{i}" for i in range(1, k + 1))


def ys(lo: int, hi: int) -> tuple[str, ...]:
    return tuple(f"Y{j}" for j in range(lo, hi + 1))


class FormalPoly:
    """Polynomial with exact rational coefficients over a declared alphabet.

    ``terms`` maps exponent vectors (aligned with ``alphabet``) to nonzero
    :class:`~fractions.Fraction` coefficients.
    """

    __slots__ = ("alphabet", "terms")

    def __init__(self, terms: Mapping[tuple[int, ...], object] | None = None,
                 alphabet: Iterable[str] = ()):
        alphabet = tuple(sorted(set(alphabet), key=_sort_key))
        clean: dict[tuple[int, ...], Fraction] = {}
        for exps, c in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != len(alphabet):
                raise DomainError("exponent vector does not match alphabet")
            if any(e < 0 for e in exps):
                raise DomainError("negative exponent")
            c = Fraction(c)
            if c:
                clean[exps] = clean.get(exps, Fraction(0)) + c
                if not clean[exps]:
                    del clean[exps]
        self.alphabet = alphabet
        self.terms = clean

    # construction --------------------------------------------------------

    @classmethod
    def const(cls, c, alphabet: Iterable[str] = ()) -> "FormalPoly":
        alphabet = tuple(sorted(set(alphabet), key=_sort_key))
        return cls({(0,) * len(alphabet): c}, alphabet)

    @classmethod
    def var(cls, tag: str, alphabet: Iterable[str] = ()) -> "FormalPoly":
        _parse(tag)
        alphabet = tuple(sorted(set(alphabet) | {tag}, key=_sort_key))
        exps = tuple(1 if v == tag else 0 for v in alphabet)
        return cls({exps: 1}, alphabet)

    def with_alphabet(self, alphabet: Iterable[str]) -> "FormalPoly":
        """Re-express over ``alphabet``, which must contain every used variable."""
        alphabet = tuple(sorted(set(alphabet), key=_sort_key))
        missing = self.variables() - set(alphabet)
        if missing:
            raise DomainError(f"alphabet lacks used variables {sorted(missing)}")
        pos = {v: i for i, v in enumerate(self.alphabet)}
        terms = {}
        for exps, c in self.terms.items():
            terms[tuple(exps[pos[v]] if v in pos else 0 for v in alphabet)] = c
        return FormalPoly(terms, alphabet)

    # inspection ----------------------------------------------------------

    def variables(self) -> set[str]:
        used = set()
        for exps in self.terms:
            used.update(v for v, e in zip(self.alphabet, exps) if e)
        return used

    def sparse(self) -> dict[tuple[tuple[str, int], ...], Fraction]:
        return {
            tuple((v, e) for v, e in zip(self.alphabet, exps) if e): c
            for exps, c in self.terms.items()
        }

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, FormalPoly):
            other = FormalPoly.const(other)
        return self.sparse() == other.sparse()

    def __hash__(self):
        return hash(frozenset(self.sparse().items()))

    def __repr__(self):
        return f"FormalPoly({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for mono, c in sorted(self.sparse().items(), key=lambda kv: (-sum(e for _, e in kv[0]), kv[0])):
            factors = [v if e == 1 else f"{v}^{e}" for v, e in mono]
            if not factors:
                parts.append(str(c))
            elif c == 1:
                parts.append("*".join(factors))
            elif c == -1:
                parts.append("-" + "*".join(factors))
            else:
                parts.append(f"{c}*" + "*".join(factors))
        return " + ".join(parts).replace("+ -", "- ")

    # arithmetic ----------------------------------------------------------

    def _lift(self, other) -> tuple["FormalPoly", "FormalPoly"]:
        if not isinstance(other, FormalPoly):
            other = FormalPoly.const(other)
        alphabet = set(self.alphabet) | set(other.alphabet)
        return self.with_alphabet(alphabet), other.with_alphabet(alphabet)

    def __add__(self, other):
        a, b = self._lift(other)
        terms = dict(a.terms)
        for exps, c in b.terms.items():
            terms[exps] = terms.get(exps, Fraction(0)) + c
        return FormalPoly(terms, a.alphabet)

    __radd__ = __add__

    def __neg__(self):
        return FormalPoly({e: -c for e, c in self.terms.items()}, self.alphabet)

    def __sub__(self, other):
        return self + (-other if isinstance(other, FormalPoly) else -Fraction(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        a, b = self._lift(other)
        terms: dict[tuple[int, ...], Fraction] = {}
        for e1, c1 in a.terms.items():
            for e2, c2 in b.terms.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                terms[e] = terms.get(e, Fraction(0)) + c1 * c2
        return FormalPoly(terms, a.alphabet)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = FormalPoly.const(1, self.alphabet)
        for _ in range(n):
            out = out * self
        return out

    def partial(self, tag: str) -> "FormalPoly":
        if tag not in self.alphabet:
            return FormalPoly({}, self.alphabet)
        i = self.alphabet.index(tag)
        terms = {}
        for exps, c in self.terms.items():
            if exps[i]:
                e = list(exps)
                e[i] -= 1
                terms[tuple(e)] = c * exps[i]
        return FormalPoly(terms, self.alphabet)


def formal_derivative(p: FormalPoly, kinds: str = "XY") -> FormalPoly:
    """``d/dx`` of ``p`` by the chain rule ``sum_v dp/dv * shift(v)``.

    Only variables whose kind is in ``kinds`` are treated as functions of
    ``x``; the others are held constant. The alphabet grows by the shifted
    tags.
    """
    alphabet = set(p.alphabet) | {shift(v) for v in p.alphabet if v[0] in kinds}
    out = FormalPoly({}, alphabet)
    for v in p.alphabet:
        if v[0] not in kinds:
            continue
        dv = p.partial(v)
        if dv.is_zero():
            continue
        out = out + dv * FormalPoly.var(shift(v), alphabet)
    return out.with_alphabet(alphabet)


@lru_cache(maxsize=None)
def build_Q(k: int) -> FormalPoly:
    """``Q_k`` over ``X_1..X_{k-1}, Y_2..Y_k``, starting from ``Q_2 = X_1 Y_2``."""
    if k < 2:
        raise DomainError("Q_k is defined for k >= 2")
    if k == 2:
        return FormalPoly.var("X1") * FormalPoly.var("Y2")
    return formal_derivative(build_Q(k - 1)).with_alphabet(xs(k - 1) + ys(2, k))


@lru_cache(maxsize=None)
def build_R(k: int) -> FormalPoly:
    """``R_k`` over ``X_1..X_k``.

    Quotient rule on ``R_k / X_1^(2k-1)`` composed with the inverse:
    ``R_{k+1} = D(R_k) X_1 - (2k - 1) R_k X_2``.
    """
    if k < 1:
        raise DomainError("R_k is defined for k >= 1")
    if k == 1:
        return FormalPoly.const(1, xs(1))
    prev = build_R(k - 1).with_alphabet(xs(k))
    x1, x2 = FormalPoly.var("X1", xs(k)), FormalPoly.var("X2", xs(k))
    nxt = formal_derivative(prev, "X") * x1 - (2 * (k - 1) - 1) * prev * x2
    return nxt.with_alphabet(xs(k))


@lru_cache(maxsize=None)
def build_P(k: int) -> tuple[FormalPoly, ...]:
    """``(P^k_2, ..., P^k_k)``; ``P^k_j`` lives over ``X_1..X_{j-1}``.

    ``P^k_j`` multiplies ``[phi_{k-j+2}(f) - phi_{k-j+2}(h)] o h^-1``. Going
    from ``k`` to ``k + 1`` each bracket either differentiates (gaining a
    factor ``X_1 = (h^-1)'``) or leaves its coefficient to be differentiated:
    ``P^{k+1}_j = P^k_j X_1 + D(P^k_{j-1})`` with out-of-range terms zero.
    """
    if k < 2:
        raise DomainError("P^k is defined for k >= 2")
    if k == 2:
        return (FormalPoly.var("X1", xs(1)),)
    prev = build_P(k - 1)  # prev[j - 2] = P^{k-1}_j for j = 2..k-1
    out = []
    for j in range(2, k + 1):
        alphabet = xs(j - 1)
        term = FormalPoly({}, alphabet)
        if j <= k - 1:
            term = term + prev[j - 2] * FormalPoly.var("X1", alphabet)
        if j - 1 >= 2:
            term = term + formal_derivative(prev[j - 3], "X")
        out.append(term.with_alphabet(alphabet))
    return tuple(out)


def eval_poly(p: FormalPoly, assignment: Mapping[str, float]) -> float:
    """Evaluate with exact rational accumulation, then round once."""
    used = p.variables()
    for tag in sorted(used, key=_sort_key):
        if tag not in assignment:
            raise DomainError(f"no value assigned to variable {tag}")
    vals = {v: Fraction(float(assignment[v])) for v in used}
    total = Fraction(0)
    for exps, c in p.terms.items():
        term = c
        for v, e in zip(p.alphabet, exps):
            if e:
                term *= vals[v] ** e
        total += term
    return float(total)


def eval_poly_grid(p: FormalPoly, assignment: Mapping[str, np.ndarray]) -> np.ndarray:
    """Floating-point evaluation over arrays of values (one per node)."""
    used = p.variables()
    for tag in sorted(used, key=_sort_key):
        if tag not in assignment:
            raise DomainError(f"no value assigned to variable {tag}")
    shape = np.broadcast_shapes(*(np.shape(assignment[v]) for v in used)) if used else ()
    total = np.zeros(shape)
    for exps, c in p.terms.items():
        term = np.full(shape, float(c))
        for v, e in zip(p.alphabet, exps):
            if e:
                term = term * np.asarray(assignment[v], dtype=float) ** e
        total = total + term
    return total


def x_assignment(rows) -> dict[str, np.ndarray]:
    """Bind ``rows[i]`` of a jet grid to ``X_i`` for ``i >= 1``."""
    return {f"X{i}": rows[i] for i in range(1, len(rows))}
