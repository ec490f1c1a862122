"""Numerical and symbolic toolkit for the groups Diff_+^k([0, 1]) and Diff_+^k(S^1)."""
from .circle import (
    CircleDiffeo,
    chordal_sup,
    circle_compose,
    circle_dk,
    circle_from,
    circle_from_family,
    circle_identity,
    circle_invert,
    circle_Phi,
    circle_phi,
    circle_rho,
    rotation,
    sigma1,
    stabilizer_decompose,
    wrap,
)
from .config import K_MAX, N_DEFAULT, TOL, TOL_EXACT, TOL_NUM, TOL_ROOT, Tolerances
from .errors import ConvergenceError, DiffgeoError, DomainError, InvariantError
from .funcspace import GridFunction, SmoothFunction, antiderivative, evaluate, grid, iota, sup_norm
from .geometry import (
    ChainResult,
    FactorizationResult,
    ObReport,
    boundedness_sweep,
    embedding_report,
    factor_into_ball,
    geodesic_chain,
    lipschitz_bound,
    ob_bounds,
)
from .interval import (
    IntervalDiffeo,
    Phi,
    PhiCoords,
    compose,
    dk,
    from_family,
    from_phi1,
    from_Phi,
    identity,
    invert,
    phi,
    rho,
)
from .polyengine import FormalPoly, build_P, build_Q, build_R, eval_poly, formal_derivative

__version__ = "0.1.0"

__all__ = [
    "CircleDiffeo",
    "chordal_sup",
    "circle_compose",
    "circle_dk",
    "circle_from",
    "circle_from_family",
    "circle_identity",
    "circle_invert",
    "circle_Phi",
    "circle_phi",
    "circle_rho",
    "rotation",
    "sigma1",
    "stabilizer_decompose",
    "wrap",
    "K_MAX",
    "N_DEFAULT",
    "TOL",
    "TOL_EXACT",
    "TOL_NUM",
    "TOL_ROOT",
    "Tolerances",
    "ConvergenceError",
    "DiffgeoError",
    "DomainError",
    "InvariantError",
    "GridFunction",
    "SmoothFunction",
    "antiderivative",
    "evaluate",
    "grid",
    "iota",
    "sup_norm",
    "ChainResult",
    "FactorizationResult",
    "ObReport",
    "boundedness_sweep",
    "embedding_report",
    "factor_into_ball",
    "geodesic_chain",
    "lipschitz_bound",
    "ob_bounds",
    "IntervalDiffeo",
    "Phi",
    "PhiCoords",
    "compose",
    "dk",
    "from_family",
    "from_phi1",
    "from_Phi",
    "identity",
    "invert",
    "phi",
    "rho",
    "FormalPoly",
    "build_P",
    "build_Q",
    "build_R",
    "eval_poly",
    "formal_derivative",
]
