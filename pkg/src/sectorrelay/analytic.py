"""Closed-form performance expressions for sector-based relay selection.

The quantity of interest is the expected density of progress: the mean,
per unit area, of the forward distance covered by successful transmissions
in one slot. For a typical transmitter it factors into

    (transmitter density) x (link success probability)
                          x (relay distance x heading cosine),

averaged over the relay distribution induced by nearest-receiver selection
inside the beam sector beyond the reference distance r_m.

Every closed form here has an independent numerical twin (quadrature over
the explicit integrand) used as an oracle by the test suite; the pairing is
deliberate and the two routes must never be collapsed into one.

Success-probability sign convention: the outage exponent is negative,
P_s = exp(-p*(phi/2pi)*lambda*t*d^2), so P_s <= 1 always. The upper bound
on the optimal reference distance is the smaller root of the quadratic

    k*C*r^2 - 4*k^(3/2)*r + 2*C  > 0,      C = lambda*(1-p)*phi,

which follows from the two-sided incomplete-gamma bound
Gamma(3/2, x) < (Gamma(1, x) + Gamma(2, x))/2 (strict for all x >= 0; see
rm_upper_bound for the variant with the constant term halved, kept only
for comparison because it does NOT dominate the optimum).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import specfun
from .errors import DomainError, VacuousBoundError
from .model import (
    NetworkParams,
    ProtocolVariant,
    radial_decay_rate,
    spatial_interference_constant,
)

TWO_PI = 2.0 * math.pi

BOUND_VARIANTS = ("standard", "alternate")


# =====================================================================
# link-level success and relay geometry
# =====================================================================

def interferer_density(params: NetworkParams, variant: ProtocolVariant = ProtocolVariant.DIRECTIONAL) -> float:
    """Density of transmitters whose beam covers a fixed receiver.

    Directional: each of the p*lambda transmitters covers the receiver with
    probability phi/(2*pi) (independent uniform headings), an independent
    thinning. Omnidirectional: all p*lambda transmitters interfere.
    """
    base = params.p * params.lam
    if variant is ProtocolVariant.DIRECTIONAL:
        return base * params.phi / TWO_PI
    return base


def success_probability(
    params: NetworkParams,
    d: float,
    variant: ProtocolVariant = ProtocolVariant.DIRECTIONAL,
) -> float:
    """Probability that a link of distance d beats the SIR threshold.

    P_s = exp(-interferer_density * t * d^2). Strictly decreasing in d, p,
    lambda and (directionally) phi; equal to 1 at d = 0. Independent of mu:
    the fading mean cancels from the SIR.
    """
    params.validate()
    if d < 0:
        raise DomainError(f"link distance must be >= 0, got {d}")
    t = spatial_interference_constant(params.alpha, params.beta)
    return math.exp(-interferer_density(params, variant) * t * d * d)


def relay_distance_cdf(params: NetworkParams, r: float) -> float:
    """CDF of the distance to the selected relay.

    The relay is the nearest receiver (density (1-p)*lambda) in the sector
    of angle phi beyond r_m, so the void probability of the annular sector
    gives  1 - exp(-lambda*(1-p)*(phi/2)*(r^2 - r_m^2))  for r >= r_m.
    """
    params.validate()
    if r < params.r_m:
        raise DomainError(
            f"relay distance {r} below the reference distance r_m={params.r_m}"
        )
    rate = params.lam * (1.0 - params.p) * params.phi / 2.0
    return -math.expm1(-rate * (r * r - params.r_m**2))


def relay_distance_pdf(params: NetworkParams, r: float) -> float:
    """Density of the relay distance: d/dr of relay_distance_cdf.

    f(r) = lambda*(1-p)*phi * r * exp(-lambda*(1-p)*(phi/2)*(r^2 - r_m^2)),
    with f(r_m) = lambda*(1-p)*phi*r_m at the lower edge.
    """
    params.validate()
    if r < params.r_m:
        raise DomainError(
            f"relay distance {r} below the reference distance r_m={params.r_m}"
        )
    rate = params.lam * (1.0 - params.p) * params.phi / 2.0
    return (
        params.lam
        * (1.0 - params.p)
        * params.phi
        * r
        * math.exp(-rate * (r * r - params.r_m**2))
    )


# =====================================================================
# expected density of progress: closed form and quadrature twin
# =====================================================================

def _decay_rates(params: NetworkParams, variant: ProtocolVariant) -> tuple[float, float, float]:
    """(a, b, k): outage decay a, void decay b, combined k = a + b.

    a = interferer_density * t governs the success exponent; b is the
    relay-void exponent lambda*(1-p)*phi/2. Their sum is the k of
    model.radial_decay_rate in the directional case and
    p*lambda*t + lambda*(1-p)*phi/2 in the omnidirectional one.
    """
    t = spatial_interference_constant(params.alpha, params.beta)
    a = interferer_density(params, variant) * t
    b = params.lam * (1.0 - params.p) * params.phi / 2.0
    return a, b, a + b


def log_expected_density(
    params: NetworkParams,
    variant: ProtocolVariant = ProtocolVariant.DIRECTIONAL,
) -> float:
    """Natural log of the expected density of progress (log-space route).

    log E = 2*log(lambda) + log(p) + log(1-p) + log(exp(u)*Gamma(3/2, u))
            - a*r_m^2 - (3/2)*log(k) + log(sin(phi/2)),   u = k*r_m^2.

    The scaled gamma keeps every term finite for arbitrarily large r_m, so
    this route never overflows; exponents beyond the double range simply
    come back as large negative logs. At phi = 2*pi the heading cosine
    averages to zero, so the value collapses to the rounding error of
    sin(phi/2); the defensive sin <= 0 branch returns -inf.
    """
    params.validate()
    a, _, k = _decay_rates(params, variant)
    u = k * params.r_m**2
    s = math.sin(params.phi / 2.0)
    if s <= 0.0:
        return -math.inf
    return (
        2.0 * math.log(params.lam)
        + math.log(params.p)
        + math.log1p(-params.p)
        + math.log(specfun.gamma_upper_3half_scaled(u))
        - a * params.r_m**2
        - 1.5 * math.log(k)
        + math.log(s)
    )


def expected_density_closed(
    params: NetworkParams,
    variant: ProtocolVariant = ProtocolVariant.DIRECTIONAL,
) -> float:
    """Expected density of progress, closed form.

    E = lambda^2 * p * (1-p) * Gamma(3/2, k*r_m^2) * k^(-3/2)
        * exp(lambda*(1-p)*(phi/2)*r_m^2) * sin(phi/2)

    with k the variant's combined decay rate. Scales exactly as
    sqrt(lambda) under the rescaling r_m -> r_m/sqrt(lambda).
    """
    return math.exp(log_expected_density(params, variant))


def expected_density_numeric(
    params: NetworkParams,
    variant: ProtocolVariant = ProtocolVariant.DIRECTIONAL,
    rel_tol: float = 1e-10,
) -> float:
    """Quadrature twin of expected_density_closed.

    Integrates p*lambda * P_s(x) * x * f_d(x) over [r_m, inf) numerically,
    with the heading average done analytically: the mean of cos over a
    uniform offset in [-phi/2, phi/2] is (2/phi)*sin(phi/2). Uses the cdf/pdf
    and success-probability routines as black boxes so the route stays
    independent of the closed form.
    """
    params.validate()
    angular_mean = 2.0 / params.phi * math.sin(params.phi / 2.0)

    def integrand(x: float) -> float:
        return (
            success_probability(params, x, variant)
            * x
            * relay_distance_pdf(params, x)
        )

    quad = specfun.integrate_semi_infinite(integrand, params.r_m, rel_tol=rel_tol)
    return params.p * params.lam * angular_mean * quad.value


def omni_expected_density(params: NetworkParams) -> float:
    """Omnidirectional-baseline expected density of progress.

    Same selection geometry, but every transmitter interferes, so the
    combined decay rate becomes k_omni = p*lambda*t + lambda*(1-p)*phi/2.
    Never exceeds the directional value at matched parameters because
    k_omni >= k with Gamma(3/2, k r^2)*k^(-3/2) decreasing in k.
    """
    return expected_density_closed(params, ProtocolVariant.OMNIDIRECTIONAL)


# =====================================================================
# bounds and closed-form optima for the reference distance
# =====================================================================

def rm_upper_bound(params: NetworkParams, variant: str = "standard") -> float:
    """Upper bound on the optimal reference distance at fixed p.

    variant="standard": smaller root of k*C*r^2 - 4*k^(3/2)*r + 2*C = 0
    with C = lambda*(1-p)*phi. At a stationary point of the progress
    density, the strict bound Gamma(3/2, u) < (Gamma(1,u)+Gamma(2,u))/2
    forces that quadratic positive, and the optimum falls below the smaller
    root; this is the bound that provably dominates the numerical optimum.

    variant="alternate": same quadratic with the constant term halved
    (discriminant 4k^3 - k*C^2 instead of 4k^3 - 2k*C^2). Kept only for
    side-by-side reporting: it does NOT dominate the optimum (it sits at
    about 0.52x the optimum where the standard root sits at 1.10x).

    Raises VacuousBoundError when the discriminant is negative (possible
    for the standard variant at small t): the parabola is then positive
    everywhere and the stationarity argument constrains nothing.
    """
    params.validate()
    if variant not in BOUND_VARIANTS:
        raise ValueError(f"unknown bound variant {variant!r}; use one of {BOUND_VARIANTS}")
    k = radial_decay_rate(params)
    c = params.lam * (1.0 - params.p) * params.phi
    factor = 2.0 if variant == "standard" else 1.0
    disc = 4.0 * k**3 - factor * k * c * c
    if disc < 0.0:
        raise VacuousBoundError(
            f"negative discriminant ({disc:.6g}) for the {variant} bound: "
            "the quadratic has no real root and the bound is vacuous"
        )
    return (2.0 * k**1.5 - math.sqrt(disc)) / (k * c)


def rm_quadratic_roots(params: NetworkParams, variant: str = "standard") -> tuple[float, float]:
    """Both roots of the bound quadratic, for consistency checks.

    Vieta: the product of the roots is 2/k for the standard variant and
    1/k for the alternate one (constant term over leading coefficient).
    """
    params.validate()
    if variant not in BOUND_VARIANTS:
        raise ValueError(f"unknown bound variant {variant!r}; use one of {BOUND_VARIANTS}")
    k = radial_decay_rate(params)
    c = params.lam * (1.0 - params.p) * params.phi
    factor = 2.0 if variant == "standard" else 1.0
    disc = 4.0 * k**3 - factor * k * c * c
    if disc < 0.0:
        raise VacuousBoundError(
            f"negative discriminant ({disc:.6g}) for the {variant} bound"
        )
    lo = (2.0 * k**1.5 - math.sqrt(disc)) / (k * c)
    hi = (2.0 * k**1.5 + math.sqrt(disc)) / (k * c)
    return lo, hi


def rm_from_p(params: NetworkParams, p: float) -> float:
    """Closed-form optimal reference distance at the jointly optimal p.

    r_m = sqrt( 2*(p*(t-pi) + pi)*(1-2p) / (p*(1-p)*t) - 3*(t-pi)/t )
          / sqrt(phi*lambda)

    Valid only where the radicand is positive, which requires p < 1/2;
    the map agrees with the stationarity system at the joint optimum and
    scales as 1/sqrt(phi*lambda).
    """
    params.validate()
    if not (0.0 < p < 1.0):
        raise DomainError(f"p must lie in (0, 1), got {p}")
    t = spatial_interference_constant(params.alpha, params.beta)
    if t <= math.pi:
        raise DomainError(
            f"closed-form r_m requires t > pi (got t={t:.6g}); "
            "the threshold/path-loss combination is outside the regime"
        )
    radicand = (
        2.0 * (p * (t - math.pi) + math.pi) * (1.0 - 2.0 * p) / (p * (1.0 - p) * t)
        - 3.0 * (t - math.pi) / t
    )
    if radicand <= 0.0:
        raise DomainError(
            f"non-positive radicand ({radicand:.6g}) in the closed-form r_m: "
            f"p={p} is outside the regime where the map is defined"
        )
    return math.sqrt(radicand) / math.sqrt(params.phi * params.lam)


# =====================================================================
# stationarity residuals in scale-free (p, u) coordinates
# =====================================================================

@dataclass(frozen=True)
class StationarityResiduals:
    """First-order conditions of the joint (p, r_m) optimum.

    Expressed in u = k*r_m^2, both residuals depend only on (p, u, t):
    the beamwidth phi cancels, which is why the jointly optimal p is
    beamwidth-independent.

    res_rm: stationarity in the reference distance,
        Gamma(3/2, u)*(1-p) - (p*t/pi + 1 - p)*sqrt(u)*exp(-u).
    res_p: stationarity in the transmission probability,
        (B(p, u) )*S(u) + S(u)*u - u^(3/2),  S(u) = exp(u)*Gamma(3/2, u),
        B = -t*u/(t-pi) - 3/2 + (1-2p)*(p*t + pi*(1-p))/(p*(1-p)*(t-pi)).
    """

    res_rm: float
    res_p: float


def stationarity_residuals(p: float, u: float, t: float) -> StationarityResiduals:
    """Evaluate both first-order residuals at scale-free coordinates (p, u).

    A joint optimum of the expected density of progress corresponds to a
    simultaneous zero. res_rm is proportional to the radial derivative of
    the progress density (same sign); res_p combines it with the
    p-derivative. Uses the scaled gamma so res_p stays finite for large u.
    """
    if not (0.0 < p < 1.0):
        raise DomainError(f"p must lie in (0, 1), got {p}")
    if u < 0.0:
        raise DomainError(f"u = k*r_m^2 must be >= 0, got {u}")
    if t <= math.pi:
        raise DomainError(f"stationarity residuals require t > pi, got t={t:.6g}")
    g = specfun.gamma_upper_3half(u)
    res_rm = g * (1.0 - p) - (p * t / math.pi + 1.0 - p) * math.sqrt(u) * math.exp(-u)
    s = specfun.gamma_upper_3half_scaled(u)
    bracket = (
        -t * u / (t - math.pi)
        - 1.5
        + (1.0 - 2.0 * p)
        * (p * t + math.pi * (1.0 - p))
        / (p * (1.0 - p) * (t - math.pi))
    )
    res_p = bracket * s + s * u - u**1.5
    return StationarityResiduals(res_rm=res_rm, res_p=res_p)
