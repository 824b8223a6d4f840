"""Config-driven experiment runner: the only human-facing surface.

Subcommands:
  census  run a density census described by a JSON config
  zeta    tabulate closed-point counts and truncated zeta values
  lift    search for hypersurfaces over F_q[t]_(t) with certified fibers
  list    show the experiment registry

Exit codes: 0 success (all scheduled tolerances met, nothing inconclusive),
1 tolerance failure, 2 config/schema violation, 3 enumeration cap exceeded.

Enumeration caps honour environment variables HYPERSIEVE_FIELD_CAP,
HYPERSIEVE_CENSUS_CAP, HYPERSIEVE_POINT_CAP, HYPERSIEVE_PERFORM_CAP and
HYPERSIEVE_FACTOR_CAP (see README).
"""

from __future__ import annotations

import argparse
import importlib.resources
import json
import sys

from . import density, report, zeta
from .density import Experiment, compare_report, run_census
from .gf import FieldDesc, FieldError, make_field, extension_of
from .homog import CapExceeded, HomogPoly, ProjPoint, parse_poly
from .ideal import SubschemeSpec
from .scheme import SectionProblem

REGISTRY = {
    "avoidance": "finite-set avoidance: exact density prod (1 - #k(w)^-1)",
    "smooth_density": ("Bertini smoothness over a finite field: "
                       "1/zeta product via the closed point sieve"),
    "taylor_density": ("Bertini smoothness with prescribed restriction "
                       "values on a finite subscheme (scaled product)"),
    "snc_density": ("strict-normal-crossing sections: stratumwise "
                    "smoothness product over the component lattice"),
    "irreducibility_density": ("Bertini irreducibility over a finite field: "
                               "density one for sections through a subscheme "
                               "of codimension >= 2"),
    "integrality_density": ("Bertini integrality: good, irreducible and "
                            "reduced sections have positive density"),
    "normal_density": ("Bertini normality for surfaces in P^3: normal = "
                       "regular in codimension one for hypersurfaces"),
    "reduced_density": ("Bertini reducedness: geometrically squarefree "
                        "sections have positive density"),
    "containment": ("containing a fixed positive-dimensional subscheme "
                    "is a density-zero condition"),
    "constant_density": "engine control: the constant predicate has density 1",
    "zeta_table": ("arithmetic zeta function as an Euler product over "
                   "closed points, truncated with an explicit tail bound"),
    "dvr_lift": ("Bertini over a discrete valuation ring: good special-fiber "
                 "sections lift to hypersurfaces over F_q[t]_(t) with "
                 "certified generic fibers"),
}

CENSUS_KINDS = set(density.KINDS)


class ConfigError(ValueError):
    pass


def load_config(path: str) -> dict:
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config: {exc}")
    import jsonschema
    schema = json.loads(importlib.resources.files("hypersieve")
                        .joinpath("schema/experiment.schema.json")
                        .read_text())
    try:
        jsonschema.validate(cfg, schema)
    except jsonschema.ValidationError as exc:
        raise ConfigError(f"config violates schema: {exc.message}")
    return cfg


def _field(cfg) -> FieldDesc:
    return make_field(cfg["field"]["p"], cfg["field"].get("s", 1))


def _parse_points(block, field, n):
    pts = []
    for entry in block:
        if isinstance(entry, dict):
            F = extension_of(field, entry["degree"])
            coords = [F.elem(v) for v in entry["coords"]]
        else:
            F = field
            coords = [F.elem(v) for v in entry]
        if len(coords) != n + 1:
            raise ConfigError(f"point needs {n + 1} coordinates")
        pts.append(ProjPoint(F, coords))
    return pts


def _parse_subscheme(block, field, n) -> SubschemeSpec:
    if block is None:
        return SubschemeSpec.empty(field, n)
    if "points" in block:
        return SubschemeSpec(field, n,
                             points=_parse_points(block["points"], field, n))
    if "ideal" in block:
        gens = [parse_poly(s, field, n) for s in block["ideal"]]
        return SubschemeSpec(field, n, gens=gens)
    return SubschemeSpec.empty(field, n)


def build_experiment(cfg, threads=None, seed=None) -> Experiment:
    field = _field(cfg)
    n = cfg["n"]
    kind = cfg["kind"]
    if kind not in CENSUS_KINDS:
        raise ConfigError(f"{kind!r} is not a census kind")
    if "degrees" not in cfg:
        raise ConfigError("census configs need a [d_lo, d_hi] degree range")
    X = (_parse_subscheme(cfg.get("X"), field, n)
         if cfg.get("X") else SubschemeSpec.whole_space(field, n))
    Z = _parse_subscheme(cfg.get("Z"), field, n)
    T = _parse_subscheme(cfg.get("T"), field, n)
    m = cfg.get("m", n if not X.gens else n - len(X.gens))
    problem = SectionProblem(X=X, Z=Z, T=T, m=m)
    options = {}
    raw_opts = cfg.get("options", {})
    if "target" in raw_opts:
        options["target"] = _parse_subscheme(raw_opts["target"], field, n)
    if "taylor_points" in raw_opts:
        options["taylor_points"] = _parse_points(raw_opts["taylor_points"],
                                                 field, n)
    if "taylor_values" in raw_opts:
        options["taylor_values"] = raw_opts["taylor_values"]
    if "components" in raw_opts:
        options["components"] = [_parse_subscheme(b, field, n)
                                 for b in raw_opts["components"]]
    for key in ("geometric", "inconclusive_abort_fraction"):
        if key in raw_opts:
            options[key] = raw_opts[key]
    tol = cfg.get("tolerance")
    if isinstance(tol, dict):
        tol = {int(k): v for k, v in tol.items()}
    return Experiment(
        kind=kind, problem=problem,
        d_lo=cfg["degrees"][0], d_hi=cfg["degrees"][1],
        tolerance=tol,
        threads=threads if threads is not None else cfg.get("threads", 1),
        seed=seed if seed is not None else cfg.get("seed", 0),
        subsample=cfg.get("subsample"),
        truncation_B=cfg.get("truncation_B", 12),
        options=options)


def cmd_census(args) -> int:
    cfg = load_config(args.config)
    e = build_experiment(cfg, threads=args.threads, seed=args.seed)
    rep = run_census(e)
    outdir = args.out or cfg.get("out", "out")
    paths = report.write_density_report(rep, outdir)
    print(report.summary_table(rep))
    print("wrote", ", ".join(sorted(paths.values())))
    inconclusive = sum(r.inconclusive for r in rep.rows)
    if e.tolerance is not None:
        verdict = compare_report(rep, e.tolerance)
        if not all(verdict["per_degree"].values()):
            bad = [d for d, ok in verdict["per_degree"].items() if not ok]
            print(f"tolerance exceeded at degrees {bad}")
            return 1
    return 1 if inconclusive else 0


def cmd_zeta(args) -> int:
    cfg = load_config(args.config)
    if cfg["kind"] != "zeta_table":
        raise ConfigError("zeta subcommand needs kind == zeta_table")
    field = _field(cfg)
    n = cfg["n"]
    B = cfg.get("truncation_B", 12)
    if cfg.get("X"):
        from .scheme import closed_point_counts
        sub = _parse_subscheme(cfg["X"], field, n)
        census = closed_point_counts(sub, B)
    else:
        census = zeta.projective_space_census(field.q, n, B)
    rows = []
    for s in cfg.get("s_values", [n + 1]):
        v, err = zeta.inverse_zeta_truncated(census, s, B)
        rows.append({"s": s, "B": B, "inv_zeta": v, "error_bound": err})
    outdir = args.out or cfg.get("out", "out")
    paths = report.write_zeta_report(census, rows, outdir)
    print(f"q={census.q} n={n} B={B}")
    print("b_r:", census.b)
    for row in rows:
        print(f"1/zeta({row['s']}) = {row['inv_zeta']:.9f} "
              f"(tail <= {row['error_bound']:.2e})")
    print("wrote", ", ".join(sorted(paths.values())))
    return 0


def cmd_lift(args) -> int:
    from .dvr import FqtField, LiftProblem, PolyT, lift_search
    cfg = load_config(args.config)
    if cfg["kind"] != "dvr_lift":
        raise ConfigError("lift subcommand needs kind == dvr_lift")
    field = _field(cfg)
    K = FqtField(field)
    n = cfg["n"]

    def const(g):
        return HomogPoly(K, g.n, g.d,
                         [K.from_poly(PolyT.const(field, c))
                          for c in g.coeffs])

    x_gens = [const(parse_poly(s, field, n))
              for s in (cfg.get("X") or {}).get("ideal", [])]
    zblock = cfg.get("Z") or {}
    z_gens = [const(parse_poly(s, field, n))
              for s in zblock.get("ideal", [])]
    z_special = None
    if zblock.get("special_points"):
        z_special = SubschemeSpec(
            field, n, points=_parse_points(zblock["special_points"],
                                           field, n))
    lp = LiftProblem(
        K=K, n=n, m=cfg.get("m", n - len(x_gens)),
        x_gens=x_gens, z_gens=z_gens, z_special=z_special,
        predicates=tuple(cfg.get("predicates",
                                 ["special_smooth", "generic_smooth"])),
        box_degree=cfg.get("box_degree", 2),
        lift_budget=cfg.get("lift_budget", 200))
    certs, diag = lift_search(lp, d=cfg["d"], count=cfg.get("count", 5))
    outdir = args.out or cfg.get("out", "out")
    paths = report.write_lift_report(certs, diag, outdir)
    from .homog import format_poly
    print(f"found {len(certs)} certified lifts at degree {cfg['d']}; "
          f"stages: {diag}")
    for i, c in enumerate(certs):
        print(f"  [{i}] special {format_poly(c.special_form)} | "
              + ", ".join(f"{k}={v}" for k, v in sorted(c.generic_flags.items())))
    print("wrote", ", ".join(sorted(paths.values())))
    return 0


def cmd_list(_args) -> int:
    width = max(len(k) for k in REGISTRY)
    for kind, anchor in REGISTRY.items():
        print(f"{kind:<{width}}  {anchor}")
    return 0


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(
        prog="hypersieve",
        description=("Exact censuses of hypersurface sections over small "
                     "finite fields, zeta-product density predictions, and "
                     "constructive lifting over F_q[t] localized at (t)."))
    sub = ap.add_subparsers(dest="command", required=True)
    for name, fn in (("census", cmd_census), ("zeta", cmd_zeta),
                     ("lift", cmd_lift)):
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="JSON config path")
        p.add_argument("--out", default=None, help="output directory")
        p.add_argument("--threads", type=int, default=None,
                       help="parallelism width")
        p.add_argument("--seed", type=int, default=None,
                       help="64-bit seed for subsampled runs")
        p.set_defaults(fn=fn)
    pl = sub.add_parser("list")
    pl.set_defaults(fn=cmd_list)
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (CapExceeded,) as exc:
        print(f"cap exceeded: {exc}", file=sys.stderr)
        return 3
    except RuntimeError as exc:
        if "cap" in str(exc):
            print(f"cap exceeded: {exc}", file=sys.stderr)
            return 3
        raise
    except (FieldError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
