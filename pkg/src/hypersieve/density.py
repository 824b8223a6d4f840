"""The census engine: enumerate the degree-d forms through Z, evaluate a
section predicate on every one of them, and compare the empirical densities
against the closed-form predictions.

Counting conventions: the denominator is the full linear space I^Z_d (the
zero form included, evaluated at its literal predicate value: it contains
every subscheme, avoids nothing, and defines no hypersurface, so it is never
smooth/reduced/irreducible).  This is the convention under which the exact
avoidance and containment counts reproduce their closed forms on the nose.

Counting strategies per predicate:
  linear ones (avoidance, containment) are counted by rank arithmetic,
  the heavy geometric ones (smooth/reduced/irreducible families over F_2 in
  the plane) by the bulk sieves, and everything else by a capped per-form
  loop using the scheme-module predicates as is.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

import numpy as np

from . import linalg, parallel, sieve, zeta
from .gf import FieldDesc
from .homog import (HomogPoly, enumerate_forms, form_from_index,
                    num_monomials, poly_eval, embed_poly)
from .ideal import (GradedPiece, SubschemeSpec, evaluation_rows, full_piece,
                    intersection_rank, stabilization_degree, vanishing_piece)
from .scheme import (SectionProblem, closed_point_degree, edim_at,
                     is_good_section, is_irreducible_section,
                     is_normal_R1_section, is_reduced_section,
                     is_smooth_section, is_snc_section)

CONVENTION = ("empirical density = hits / #I^Z_d with the zero form counted "
              "in the denominator and evaluated at its literal predicate "
              "value")

BULK_KINDS = {"smooth_density", "taylor_density", "irreducibility_density",
              "integrality_density", "reduced_density"}
LINEAR_KINDS = {"avoidance", "containment"}

KINDS = ("avoidance", "smooth_density", "taylor_density", "snc_density",
         "irreducibility_density", "integrality_density", "normal_density",
         "reduced_density", "containment", "constant_density")


def per_form_cap() -> int:
    return int(os.environ.get("HYPERSIEVE_PERFORM_CAP", 2 ** 16))


@dataclass
class Experiment:
    kind: str
    problem: SectionProblem
    d_lo: int
    d_hi: int
    tolerance: object = None          # float, or {degree: float}
    threads: int = 1
    seed: int = 0
    subsample: int | None = None      # draw this many forms instead of all
    truncation_B: int = 12
    options: dict = dc_field(default_factory=dict)
    # options used per kind:
    #   avoidance / containment: "target" SubschemeSpec (defaults to problem.T)
    #   taylor_density: "taylor_points" [ProjPoint] and "taylor_values" [[int]]
    #   snc_density: "components" [SubschemeSpec]
    #   inconclusive_abort_fraction: float (default 0.05)

    def validate(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown experiment kind {self.kind!r}")
        if self.d_lo < 1 or self.d_hi < self.d_lo:
            raise ValueError("degree range must satisfy 1 <= d_lo <= d_hi")
        c = stabilization_degree(self.problem.Z, d_max=max(self.d_hi, 4))
        if c is None or self.d_lo < c:
            raise ValueError(
                f"d_lo={self.d_lo} is below the stabilization degree "
                f"{c} of Z; densities would not be asymptotically meaningful")
        return c


@dataclass
class DegreeRow:
    d: int
    size: int
    hits: int
    inconclusive: int
    empirical: Fraction
    predicted: float | None
    abs_dev: float | None
    half_width: float | None = None


@dataclass
class DensityReport:
    experiment_kind: str
    rows: list
    prediction: zeta.DensityPrediction | None
    stabilization_degree: int
    seed: int
    threads: int
    exhaustive: bool
    convention: str = CONVENTION

    def to_json_dict(self):
        # parallelism width is deliberately not echoed: reports are
        # byte-identical across widths
        return {
            "experiment": self.experiment_kind,
            "convention": self.convention,
            "stabilization_degree": self.stabilization_degree,
            "seed": self.seed,
            "exhaustive": self.exhaustive,
            "prediction": (self.prediction.to_json_dict()
                           if self.prediction else None),
            "rows": [{
                "d": r.d, "size": r.size, "hits": r.hits,
                "inconclusive": r.inconclusive,
                "empirical_num": r.empirical.numerator,
                "empirical_den": r.empirical.denominator,
                "empirical": float(r.empirical),
                "predicted": r.predicted,
                "abs_dev": r.abs_dev,
                "half_width": r.half_width,
            } for r in self.rows],
        }


# ---------------------------------------------------------------------------
# predictions

def build_prediction(e: Experiment) -> zeta.DensityPrediction | None:
    q = e.problem.field.q
    kind = e.kind
    if kind == "avoidance":
        W = e.options.get("target", e.problem.T)
        return zeta.predict_avoidance(q, W.point_degrees())
    if kind == "containment":
        return zeta.predict_containment()
    if kind in ("irreducibility_density", "integrality_density"):
        return zeta.predict_irreducibility()
    if kind in ("smooth_density", "taylor_density"):
        return _smooth_prediction(e)
    if kind == "snc_density":
        return _snc_prediction(e)
    if kind == "constant_density":
        return zeta.DensityPrediction(Fraction(1), "one")
    return None  # normal_density, reduced_density: positive but no closed form


def _enum_census_depth(field, n: int, B: int) -> int:
    """Largest census depth reachable by point enumeration under the cap."""
    from .ideal import point_enum_cap
    r = B
    while r > 1 and (field.q ** r) ** (n + 1) > point_enum_cap():
        r -= 1
    return r


def _ambient_census(e: Experiment, B: int):
    prob = e.problem
    if prob.X.gens or prob.X.is_point_set():
        from .scheme import closed_point_counts
        return closed_point_counts(prob.X,
                                   _enum_census_depth(prob.field, prob.n, B))
    return zeta.projective_space_census(prob.field.q, prob.n, B)


def _smooth_prediction(e: Experiment):
    B = e.truncation_B
    prob = e.problem
    if prob.X.gens or prob.X.is_point_set():
        B = _enum_census_depth(prob.field, prob.n, B)
    q = e.problem.field.q
    m = e.problem.m
    census_x = _ambient_census(e, B)
    taylor = None
    y_points = e.options.get("taylor_points", [])
    if e.kind == "taylor_density":
        degs = [closed_point_degree(P, q) for P in y_points]
        h0 = q ** sum(degs)
        t = len(e.options.get("taylor_values", [[0] * len(y_points)]))
        taylor = (t, h0)
        census_x = zeta.census_difference(
            census_x, zeta.points_census(q, degs, B))
    v_strata = []
    census_u = census_x
    if e.problem.Z.is_point_set() and e.problem.Z.points:
        zdegs = e.problem.Z.point_degrees()
        census_u = zeta.census_difference(
            census_u, zeta.points_census(q, zdegs, B))
        by_edim = {}
        for P in e.problem.Z.points:
            ed = edim_at(e.problem.X, P) if e.problem.X.gens else 0
            by_edim.setdefault(ed, []).append(closed_point_degree(P, q))
        for ed, degs in sorted(by_edim.items()):
            v_strata.append((ed, zeta.points_census(q, degs, B)))
    return zeta.predict_smooth_product([(census_u, m, v_strata)], B,
                                       taylor=taylor)


def _snc_prediction(e: Experiment):
    """Product over the locally closed strata E'_J = E_J minus all deeper
    intersections (each smooth of dimension m - |J|): the snc predicate is
    stratumwise smoothness, so its density is the same product formula."""
    from itertools import combinations
    from .scheme import closed_point_counts
    comps = e.options.get("components", [])
    prob = e.problem
    B = _enum_census_depth(prob.field, prob.n, e.truncation_B)
    q = prob.field.q
    r = len(comps)
    subsets = [J for size in range(r + 1)
               for J in combinations(range(r), size)]
    a_full = {}
    for J in subsets:
        gens = list(prob.X.gens)
        for i in J:
            gens.extend(comps[i].gens)
        if not gens:
            a_full[J] = zeta.projective_space_census(q, prob.n, B).a
        else:
            a_full[J] = closed_point_counts(
                SubschemeSpec(prob.field, prob.n, gens=gens), B).a
    strata = []
    for J in subsets:
        # Mobius over the subset lattice: points of E_J in no deeper E_J'
        a = [0] * B
        for J2 in subsets:
            if set(J) <= set(J2):
                sign = (-1) ** (len(J2) - len(J))
                a = [x + sign * y for x, y in zip(a, a_full[J2])]
        strata.append((zeta.census_from_counts(q, a), prob.m - len(J), []))
    return zeta.predict_smooth_product(strata, B)


# ---------------------------------------------------------------------------
# counting

def run_census(e: Experiment) -> DensityReport:
    c_z = e.validate()
    pred = build_prediction(e)
    rows = []
    for d in range(e.d_lo, e.d_hi + 1):
        piece = vanishing_piece(e.problem.Z, d)
        if e.subsample is not None:
            row = _subsample_count(e, d, piece, pred)
        else:
            row = _exhaustive_count(e, d, piece, pred)
        rows.append(row)
    return DensityReport(e.kind, rows, pred, c_z, e.seed, e.threads,
                         e.subsample is None)


def _row(d, size, hits, inconclusive, pred, half_width=None):
    emp = Fraction(hits, size)
    predicted = pred.as_float() if pred else None
    dev = abs(float(emp) - predicted) if pred else None
    return DegreeRow(d, size, hits, inconclusive, emp, predicted, dev,
                     half_width)


def _exhaustive_count(e: Experiment, d, piece: GradedPiece, pred):
    q = e.problem.field.q
    size = q ** piece.rank
    kind = e.kind
    if kind in LINEAR_KINDS:
        hits = _linear_count(e, d, piece)
        return _row(d, size, hits, 0, pred)
    if kind in BULK_KINDS and q == 2 and e.problem.n == 2:
        hits = _bulk_count(e, d, piece)
        return _row(d, size, hits, 0, pred)
    if kind == "constant_density":
        return _row(d, size, size, 0, pred)
    hits, inconclusive = _per_form_count(e, d, piece)
    frac_limit = e.options.get("inconclusive_abort_fraction", 0.05)
    if inconclusive > frac_limit * size:
        raise RuntimeError(
            f"{inconclusive}/{size} inconclusive predicate verdicts at d={d}; "
            "the census regime is not decisive")
    return _row(d, size, hits, inconclusive, pred)


# -- linear predicates: rank arithmetic, exact at any size ------------------

def _linear_count(e: Experiment, d, piece: GradedPiece) -> int:
    prob = e.problem
    q = prob.field.q
    target = e.options.get("target", prob.T)
    if e.kind == "containment":
        tgt_piece = vanishing_piece(target, d)
        both = intersection_rank(piece, tgt_piece)
        return q ** both
    # avoidance of a finite point set: count forms whose restriction to
    # every point is nonzero, via the image of the evaluation map
    if not target.is_point_set():
        raise ValueError("avoidance counting needs a finite point set")
    blocks = []          # rows of the evaluation matrix, grouped by point
    for P in target.points:
        rows = evaluation_rows(prob.field, prob.n, d, [P])
        blocks.append(rows)
    basis = piece.basis_polys()
    cols = []
    for b in basis:
        col = []
        for rows in blocks:
            for r in rows:
                v = prob.field.zero()
                for coeff, c in zip(r, b.coeffs):
                    v = v + coeff * c
                col.append(v)
        cols.append(col)
    nrows = len(cols[0]) if cols else 0
    # image basis of the map piece -> prod k(w)
    ech, _ = linalg.rref([list(c) for c in cols], nrows, prob.field.one())
    rho = len(ech)
    sizes = [len(b) for b in blocks]
    good = 0
    for idx in range(q ** rho):
        vec = [prob.field.zero()] * nrows
        rest = idx
        for brow in reversed(ech):
            rest, digit = divmod(rest, q)
            if digit:
                s = prob.field.elem(digit)
                vec = [v + s * w for v, w in zip(vec, brow)]
        pos = 0
        ok = True
        for s in sizes:
            if not any(vec[pos:pos + s]):
                ok = False
                break
            pos += s
        if ok:
            good += 1
    return good * q ** (piece.rank - rho)


# -- bulk predicates over F_2 in the plane ----------------------------------

def _bulk_count(e: Experiment, d, piece: GradedPiece) -> int:
    prob = e.problem
    n = prob.n
    N = num_monomials(n, d)
    if e.kind in ("smooth_density", "taylor_density"):
        domain_piece = piece
        excluded = []
        if e.kind == "taylor_density":
            y_points = e.options["taylor_points"]
            values = e.options.get("taylor_values", [[0] * len(y_points)])
            if any(any(v != 0 for v in tup) for tup in values):
                raise ValueError("bulk restriction counting supports only "
                                 "the zero restriction value")
            if not prob.Z.is_point_set():
                raise ValueError("bulk restriction counting needs Z as a "
                                 "point set")
            combined = SubschemeSpec(
                prob.field, n,
                points=list(prob.Z.points or []) + list(y_points))
            domain_piece = vanishing_piece(combined, d)
            excluded = [tuple(c.val for c in P.coords) for P in y_points]
        masks = sieve.piece_rank_masks(domain_piece)
        bitmap = sieve.smooth_singular_bitmap(n, d, masks, excluded,
                                              threads=e.threads)
        return int((~bitmap).sum())
    # factorization families: full-space bitmaps, read at domain indices
    red = sieve.reducible_bitmap(n, d)
    need_norm = e.kind in ("irreducibility_density", "integrality_density")
    norm = sieve.norm_split_bitmap(prob.field, n, d) if need_norm else None
    nsq = (sieve.nonsquarefree_bitmap(n, d)
           if e.kind in ("reduced_density", "integrality_density") else None)
    masks = sieve.piece_rank_masks(piece)
    domain_to_full = sieve.span_census_indices(masks, N)
    if e.kind == "irreducibility_density":
        good = ~red[domain_to_full]
        if e.options.get("geometric"):
            good &= ~norm[domain_to_full]
    elif e.kind == "integrality_density":
        # irreducible implies geometrically squarefree, so over F_q integral
        # sections are exactly the irreducible ones; keep the reduced factor
        # anyway since it is free to read
        good = ~red[domain_to_full] & ~nsq[domain_to_full]
        if e.options.get("geometric"):
            good &= ~norm[domain_to_full]
    else:  # reduced_density
        good = ~nsq[domain_to_full]
    return int(good.sum())


# -- generic per-form loop ---------------------------------------------------

def predicate_callable(e: Experiment):
    prob = e.problem
    kind = e.kind

    if kind == "snc_density":
        comps = e.options["components"]

        def pred(f):
            ok, _ = is_snc_section(prob.X, comps, f, prob.m)
            return ok
    elif kind == "normal_density":
        def pred(f):
            if f.is_zero():
                return False
            return is_normal_R1_section(f)
    elif kind in ("smooth_density", "taylor_density"):
        def pred(f):
            ok, _ = is_smooth_section(prob, f, mode="exact")
            return ok
    elif kind == "irreducibility_density":
        geometric = bool(e.options.get("geometric"))

        def pred(f):
            return (not f.is_zero()) and is_irreducible_section(f, geometric)
    elif kind == "integrality_density":
        def pred(f):
            return ((not f.is_zero()) and is_irreducible_section(f)
                    and is_reduced_section(f))
    elif kind == "reduced_density":
        def pred(f):
            return (not f.is_zero()) and is_reduced_section(f)
    elif kind == "avoidance":
        target = e.options.get("target", prob.T)

        def pred(f):
            return all(poly_eval(embed_poly(f, P.field), P)
                       for P in target.points)
    elif kind == "containment":
        target = e.options.get("target", prob.T)

        def pred(f, _cache={}):
            if f.d not in _cache:
                _cache[f.d] = vanishing_piece(target, f.d)
            return _cache[f.d].contains(f)
    else:
        raise ValueError(f"no per-form predicate for kind {kind!r}")
    return pred


def _per_form_count(e: Experiment, d, piece: GradedPiece):
    q = e.problem.field.q
    size = q ** piece.rank
    if size > per_form_cap():
        raise RuntimeError(
            f"census size {size} exceeds the per-form cap; this predicate "
            "has no bulk path (set HYPERSIEVE_PERFORM_CAP to raise)")
    units = _chunk_bounds(size, max(1, e.threads * 2))
    results = parallel.run_units(_PerFormWorker(e, d), units, e.threads)
    hits = sum(r[0] for r in results)
    inconclusive = sum(r[1] for r in results)
    return hits, inconclusive


class _PerFormWorker:
    """Picklable per-form chunk evaluator for the process pool."""

    def __init__(self, e: Experiment, d: int):
        self.e = e
        self.d = d

    def __call__(self, bound):
        e, d = self.e, self.d
        piece = vanishing_piece(e.problem.Z, d)
        pred = predicate_callable(e)
        basis = piece.basis_polys()
        lo, hi = bound
        hits = inconclusive = 0
        for idx in range(lo, hi):
            f = form_from_index(e.problem.field, e.problem.n, d, basis, idx)
            v = pred(f)
            if v is None:
                inconclusive += 1
            elif v:
                hits += 1
        return hits, inconclusive


def _chunk_bounds(size, nchunks):
    return [(size * i // nchunks, size * (i + 1) // nchunks)
            for i in range(nchunks) if size * i // nchunks
            != size * (i + 1) // nchunks] or [(0, size)]


def _subsample_count(e: Experiment, d, piece: GradedPiece, pred_obj):
    rng = np.random.default_rng(e.seed + d)
    q = e.problem.field.q
    size = q ** piece.rank
    n_draw = e.subsample
    pred = predicate_callable(e)
    basis = piece.basis_polys()
    hits = inconclusive = 0
    for _ in range(n_draw):
        idx = int(rng.integers(0, size))
        f = form_from_index(e.problem.field, e.problem.n, d, basis, idx)
        v = pred(f)
        if v is None:
            inconclusive += 1
        elif v:
            hits += 1
    p_hat = hits / n_draw
    half = 1.96 * (p_hat * (1 - p_hat) / n_draw) ** 0.5
    emp = Fraction(hits, n_draw)
    predicted = pred_obj.as_float() if pred_obj else None
    dev = abs(float(emp) - predicted) if pred_obj else None
    return DegreeRow(d, size, hits, inconclusive, emp, predicted, dev, half)


# ---------------------------------------------------------------------------

def compare_report(report: DensityReport, tolerance):
    """Per-degree tolerance verdicts plus the trend verdict (deviation at
    d_hi no larger than at d_lo).  tolerance: float or {degree: float}."""
    per_degree = {}
    for r in report.rows:
        if r.abs_dev is None:
            per_degree[r.d] = True
            continue
        tol = tolerance.get(r.d) if isinstance(tolerance, dict) else tolerance
        per_degree[r.d] = True if tol is None else (r.abs_dev <= tol)
    devs = [r.abs_dev for r in report.rows if r.abs_dev is not None]
    trend_ok = (devs[-1] <= devs[0] + 1e-12) if len(devs) >= 2 else True
    return {"per_degree": per_degree, "trend_ok": trend_ok,
            "all_ok": all(per_degree.values()) and trend_ok}
