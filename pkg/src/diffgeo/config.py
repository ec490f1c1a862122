"""Numerical constants shared by every module.

All grid-dependent slack lives here so that one record controls it.
"""
from __future__ import annotations

from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Tolerances:
    exact: float = 1e-10   # identities that hold up to rounding only
    num: float = 1e-6      # identities limited by grid resolution
    root: float = 1e-13    # |f(y) - x| target for monotone inversion
    dpos_min: float = 1e-9  # smallest admissible first derivative

    def with_num(self, num: float) -> "Tolerances":
        return replace(self, num=num)


TOL = Tolerances()

TOL_EXACT = TOL.exact
TOL_NUM = TOL.num
TOL_ROOT = TOL.root
DPOS_MIN = TOL.dpos_min

K_MAX = 6
N_DEFAULT = 2048
