"""Truncated zeta Euler products over closed points and the closed-form
density predictions they feed: exact avoidance products, the smooth-section
product over strata with an optional restriction ("Taylor") factor, and the
degenerate exact predictions 0 and 1.

Exact values stay exact rationals; truncated Euler products are floats and
always carry an explicit tail bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .scheme import PointCensus, census_from_counts


# ---------------------------------------------------------------------------
# census arithmetic (a_r is additive in disjoint unions)

def projective_space_census(q: int, n: int, B: int) -> PointCensus:
    a = [sum(q ** (i * r) for i in range(n + 1)) for r in range(1, B + 1)]
    return census_from_counts(q, a)


def points_census(q: int, degrees, B: int) -> PointCensus:
    """Census of a finite reduced set of closed points of given degrees."""
    a = [sum(e for e in degrees if r % e == 0) for r in range(1, B + 1)]
    return census_from_counts(q, a)


def empty_census(q: int, B: int) -> PointCensus:
    return PointCensus(q, [0] * B, [0] * B)


def census_difference(big: PointCensus, small: PointCensus) -> PointCensus:
    """Census of X minus Y for closed Y inside X (a_r subtracts; Mobius
    inversion re-checks consistency)."""
    if big.q != small.q or big.depth != small.depth:
        raise ValueError("censuses are not comparable")
    return census_from_counts(big.q, [x - y for x, y in zip(big.a, small.a)])


def census_dimension(c: PointCensus) -> int:
    """Growth exponent max_r floor(log_q a_r / r); -1 for the empty scheme."""
    dim = -1
    for r, ar in enumerate(c.a, start=1):
        if ar > 0:
            dim = max(dim, int(math.log(ar) / (r * math.log(c.q)) + 1e-9))
    return dim


# ---------------------------------------------------------------------------

class DivergenceError(ValueError):
    pass


def _tail_bound(c: PointCensus, s: int, B: int, dim: int) -> float:
    """Tail of the log-product past B from b_r <= a_r <= C q^(r dim)."""
    if dim < 0:
        return 0.0
    q = c.q
    C = max((ar / q ** (r * dim) for r, ar in enumerate(c.a, start=1) if ar),
            default=1.0)
    gap = s - dim
    # -log(1 - x) <= 2x for x <= 1/2
    geom = q ** (-gap * (B + 1)) / (1.0 - q ** (-gap))
    return 2.0 * C * geom


def zeta_truncated(c: PointCensus, s: int, B: int | None = None,
                   dim: int | None = None):
    """Truncated Euler product prod_{r<=B} (1 - q^{-s r})^{-b_r}.

    Returns (value, tail_bound) where tail_bound bounds the multiplicative
    log-gap to the full product.  Raises DivergenceError for s <= dim.
    """
    if B is None:
        B = c.depth
    if B > c.depth:
        raise ValueError(f"census only reaches degree {c.depth}")
    if dim is None:
        dim = census_dimension(c)
    if s <= dim:
        raise DivergenceError(f"zeta product diverges: s={s} <= dim={dim}")
    q = c.q
    log_val = 0.0
    for r in range(1, B + 1):
        br = c.b[r - 1]
        if br:
            log_val -= br * math.log1p(-q ** (-s * r))
    return math.exp(log_val), _tail_bound(c, s, B, dim)


def inverse_zeta_truncated(c: PointCensus, s: int, B: int | None = None,
                           dim: int | None = None):
    """(1/zeta)_B; monotone nonincreasing in B, converges from above."""
    v, tail = zeta_truncated(c, s, B, dim)
    inv = 1.0 / v
    # 1/zeta_B - 1/zeta <= (1/zeta_B) (1 - exp(-tail))
    return inv, inv * -math.expm1(-tail)


# ---------------------------------------------------------------------------

@dataclass
class DensityPrediction:
    value: object                    # Fraction (exact) or float (truncated)
    formula: str                     # avoidance | poonen_product |
    #                                  taylor_scaled | zero | one
    error_bound: float = 0.0
    inputs: dict = dc_field(default_factory=dict)

    def is_exact(self):
        return isinstance(self.value, Fraction)

    def as_float(self):
        return float(self.value)

    def to_json_dict(self):
        out = {"formula": self.formula, "error_bound": self.error_bound,
               "inputs": self.inputs}
        if self.is_exact():
            out["value"] = {"num": self.value.numerator,
                            "den": self.value.denominator}
        else:
            out["value"] = self.value
        return out


def predict_avoidance(q: int, point_degrees) -> DensityPrediction:
    """Exact product of (1 - #k(w)^-1) over the avoided closed points."""
    val = Fraction(1)
    for e in point_degrees:
        val *= 1 - Fraction(1, q ** e)
    return DensityPrediction(val, "avoidance",
                             inputs={"q": q, "degrees": list(point_degrees)})


def predict_containment() -> DensityPrediction:
    """Containing a fixed positive-dimensional subscheme has density zero."""
    return DensityPrediction(Fraction(0), "zero")


def predict_irreducibility() -> DensityPrediction:
    """Irreducibility of sections holds with density one (the imposed
    subscheme must meet the closure in codimension >= 2)."""
    return DensityPrediction(Fraction(1), "one")


def predict_smooth_product(strata, B: int,
                           taylor: tuple[int, int] | None = None
                           ) -> DensityPrediction:
    """Density of sections smooth along each stratum, with an optional
    restriction factor #T / #H^0(Y, O_Y):

        (#T/#H0) * prod_i [ zeta_{U_i \\ V_i}(m_i+1)
                            * prod_{e<=m_i-1} zeta_{(V_i)_e}(m_i-e) ]^(-1)

    strata: list of (census_U_minus_V, m_i, [(e, census_V_e), ...]).
    """
    val = 1.0
    err = 0.0
    for census_u, m, v_strata in strata:
        inv, bound = inverse_zeta_truncated(census_u, m + 1, B)
        val *= inv
        err += bound / max(inv, 1e-300)
        for e, census_ve in v_strata:
            if e > m - 1:
                raise ValueError("edim stratum at or above the dimension")
            inv_v, bound_v = inverse_zeta_truncated(census_ve, m - e, B)
            val *= inv_v
            err += bound_v / max(inv_v, 1e-300)
    formula = "poonen_product"
    inputs = {"B": B}
    if taylor is not None:
        t, h0 = taylor
        if not (0 < t <= h0):
            raise ValueError("restriction set must be a nonempty subset")
        val *= t / h0
        inputs["taylor"] = {"t": t, "h0": h0}
        if t != h0:
            formula = "taylor_scaled"
    # relative log error -> absolute
    return DensityPrediction(val, formula, error_bound=val * err,
                             inputs=inputs)
