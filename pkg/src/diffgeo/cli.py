"""``diffgeo`` command-line interface.

Subcommands
-----------
gen     sample a family member and write its JSON
metric  print ``rho``, ``dk`` or ``sigma1`` between two files
coords  write ``Phi_k`` of a file as JSON
factor  factor into a small ball; writes ``factor_<i>.json`` and ``radii.csv``
chain   geodesic chain on the circle; writes ``i,step_cost`` CSV
ob      (OB) bound report over several files; writes ``j,sup`` CSV
verify  run residual suites; prints ``kind,k,max_residual`` CSV

Failures exit nonzero and print one JSON object ``{"error": ..., "message": ...}``
on stderr. Setting ``DIFFGEO_THREADS`` caps the worker threads used for
per-factor and per-member work.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

from .circle import CircleDiffeo, circle_from_family, circle_rho, sigma1
from .config import K_MAX, N_DEFAULT
from .errors import ConvergenceError, DiffgeoError, DomainError
from .geometry import factor_into_ball, geodesic_chain, ob_bounds
from .interval import Phi, dk, from_family, rho
from .io import csv_text, dumps, load_diffeo, save_diffeo
from .verify import run_suite

INTERVAL_NAMES = ("identity", "exp", "mobius")
CIRCLE_NAMES = ("rotation", "cosine", "circle-identity")

EXIT_DOMAIN = 2
EXIT_CONVERGENCE = 3
EXIT_VERIFY = 1


@dataclass(frozen=True)
class RunConfig:
    n: int = N_DEFAULT
    k: int = 1
    tol: float | None = None
    seed: int = 0
    out: str | None = None

    def __post_init__(self):
        if self.n < 16 or self.n % 2:
            raise DomainError(f"--n must be even and >= 16, got {self.n}")
        if not 1 <= self.k <= K_MAX:
            raise DomainError(f"--k must be in 1..{K_MAX}, got {self.k}")
        if self.tol is not None and not self.tol > 0:
            raise DomainError("--tol must be positive")


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _fmt(x: float) -> str:
    return format(x, "#.12g")


# ---------------------------------------------------------------------------
# subcommands


def cmd_gen(args, cfg: RunConfig) -> int:
    name = args.family
    if name in INTERVAL_NAMES:
        params = {"identity": (), "exp": (args.a,), "mobius": (args.t,)}[name]
        f = from_family(name, params, cfg.k, cfg.n)
    else:
        if name == "circle-identity":
            f = circle_from_family("identity", (), cfg.k, cfg.n)
        elif name == "rotation":
            f = circle_from_family("rotation", (args.t,), cfg.k, cfg.n)
        else:
            f = circle_from_family("cosine", (args.a, args.c, args.t), cfg.k, cfg.n)
    _emit(dumps(f.to_dict()), cfg.out)
    return 0


def cmd_metric(args, cfg: RunConfig) -> int:
    f, g = load_diffeo(args.file_a), load_diffeo(args.file_b)
    if f.manifold != g.manifold:
        raise DomainError(f"manifold mismatch: {f.manifold} vs {g.manifold}")
    order = args.order or cfg.k
    if args.kind == "sigma1":
        if f.manifold != "circle":
            raise DomainError("sigma1 is defined for circle maps only")
        value = sigma1(f, g)
    elif args.kind == "dk":
        value = dk(f, g, order)
    else:
        value = circle_rho(f, g, order) if f.manifold == "circle" else rho(f, g, order)
    _emit(_fmt(value) + "\n", cfg.out)
    return 0


def cmd_coords(args, cfg: RunConfig) -> int:
    f = load_diffeo(args.file)
    coords = Phi(f, args.order or cfg.k)
    _emit(dumps(coords.to_dict()), cfg.out)
    return 0


def cmd_factor(args, cfg: RunConfig) -> int:
    f = load_diffeo(args.file)
    res = factor_into_ball(f, args.order or cfg.k, args.eps)
    outdir = Path(cfg.out or ".")
    outdir.mkdir(parents=True, exist_ok=True)
    width = len(str(res.r))
    for i, g in enumerate(res.factors, start=1):
        save_diffeo(g, outdir / f"factor_{i:0{width}d}.json")
    (outdir / "radii.csv").write_text(csv_text(("i", "radius"), enumerate(res.radii, start=1)))
    summary = {
        "r": res.r,
        "initial_r": res.initial_r,
        "doublings": res.doublings,
        "max_radius": max(res.radii),
        "recomposition_error": res.recomposition_error,
        "rotation": res.rotation,
    }
    sys.stdout.write(dumps(summary))
    return 0


def cmd_chain(args, cfg: RunConfig) -> int:
    f = load_diffeo(args.file)
    if not isinstance(f, CircleDiffeo):
        raise DomainError("chain needs a circle diffeomorphism")
    steps = args.steps if args.steps == "auto" else int(args.steps)
    res = geodesic_chain(f, steps)
    _emit(csv_text(("i", "step_cost"), enumerate(res.step_costs, start=1)), cfg.out)
    return 0


def cmd_ob(args, cfg: RunConfig) -> int:
    family = [load_diffeo(p) for p in args.files]
    rep = ob_bounds(family, cfg.k)
    _emit(csv_text(("j", "sup"), rep.rows()), cfg.out)
    return 0


def cmd_verify(args, cfg: RunConfig) -> int:
    checks = run_suite(args.suite, args.order or cfg.k, cfg.n, cfg.seed)
    if cfg.tol is not None:
        checks = [c._replace(tol=cfg.tol) if c.tol > 0 else c for c in checks]
    _emit(csv_text(("kind", "k", "max_residual"), [(c.kind, c.k, c.residual) for c in checks]), cfg.out)
    return 0 if all(c.ok for c in checks) else EXIT_VERIFY


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, default=argparse.SUPPRESS, help="grid intervals N (even, >= 16)")
    common.add_argument("--k", type=int, default=argparse.SUPPRESS, help="jet order k")
    common.add_argument("--tol", type=float, default=argparse.SUPPRESS, help="override numerical tolerance")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="seed for randomized sweeps")
    common.add_argument("--out", default=argparse.SUPPRESS, help="output file (directory for factor)")

    parser = argparse.ArgumentParser(prog="diffgeo", parents=[common], description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", parents=[common], help="sample a family member")
    p.add_argument("--family", required=True, choices=INTERVAL_NAMES + CIRCLE_NAMES)
    p.add_argument("--a", type=float, default=0.0, help="exp rate or cosine amplitude")
    p.add_argument("--t", type=float, default=0.0, help="mobius parameter or rotation")
    p.add_argument("--c", type=float, default=0.0, help="cosine phase")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("metric", parents=[common], help="distance between two files")
    p.add_argument("kind", choices=("rho", "dk", "sigma1"))
    p.add_argument("file_a")
    p.add_argument("file_b")
    p.add_argument("--order", type=int, default=None)
    p.set_defaults(func=cmd_metric)

    p = sub.add_parser("coords", parents=[common], help="Phi_k coordinates")
    p.add_argument("file")
    p.add_argument("--order", type=int, default=None)
    p.set_defaults(func=cmd_coords)

    p = sub.add_parser("factor", parents=[common], help="factor into an epsilon-ball")
    p.add_argument("file")
    p.add_argument("--order", type=int, default=None)
    p.add_argument("--eps", type=float, required=True)
    p.set_defaults(func=cmd_factor)

    p = sub.add_parser("chain", parents=[common], help="geodesic chain on the circle")
    p.add_argument("file")
    p.add_argument("--steps", default="auto", help="number of steps or 'auto'")
    p.set_defaults(func=cmd_chain)

    p = sub.add_parser("ob", parents=[common], help="(OB) bounds over a family")
    p.add_argument("files", nargs="+")
    p.set_defaults(func=cmd_ob)

    p = sub.add_parser("verify", parents=[common], help="identity and invariant residual suites")
    p.add_argument("--suite", choices=("identities", "invariants", "all"), default="all")
    p.add_argument("--order", type=int, default=None)
    p.set_defaults(func=cmd_verify)
    return parser


def _error(kind: str, message: str) -> None:
    sys.stderr.write(json.dumps({"error": kind, "message": message}, sort_keys=True) + "\n")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = RunConfig(
            n=getattr(args, "n", N_DEFAULT),
            k=getattr(args, "k", 1),
            tol=getattr(args, "tol", None),
            seed=getattr(args, "seed", 0),
            out=getattr(args, "out", None),
        )
        return args.func(args, cfg)
    except ConvergenceError as exc:
        _error(type(exc).__name__, str(exc))
        return EXIT_CONVERGENCE
    except (DiffgeoError, OSError, KeyError, ValueError) as exc:
        _error(type(exc).__name__, str(exc))
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
