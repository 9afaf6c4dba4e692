"""Closed-form secrecy metrics and their quadrature reference versions.

The secrecy outage probability and both ergodic-rate terms of the
average secrecy capacity reduce to one-dimensional integrals of the
channel CDFs against the exponential eavesdropper density. Each metric
is provided twice, through fully independent numerical routes:

* the closed form: Gauss-Chebyshev quadrature of the incomplete-gamma
  series representation, and
* a ``*_reference`` twin: adaptive quadrature (scipy) of the same
  integral using the erfc/Marcum representation of the CDF.

Agreement between the two validates the series, the quadrature rule and
the algebra at once; the Monte Carlo module provides the third,
model-independent route.

Both outage integrals have a finite upper limit only because the SNDRs
saturate; the probability mass of the eavesdropper gain beyond that
limit makes outage certain and must be added as a closed-form tail term
(exp(-limit/lambda_e)). Dropping it is visibly wrong for lambda_e of a
few: the tail reaches ~1e-2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy import integrate

from .channel import ChannelStats, SystemParams, cdf_rho_d, ccdf_rho_d
from .specfun import DEFAULT_SERIES, SeriesControl, e1_scaled


class UnsupportedRegimeError(ValueError):
    """Parameters outside the validity region of a closed form."""


@dataclass(frozen=True)
class ThetaSet:
    """Coefficients of the outage-region geometry.

    With kd = kappa_d_t2 + kappa_d_r2, ke = kappa_e_t2 + kappa_e_r2 and
    vartheta = gamma_th - 1:

      theta1 = vartheta ke + gamma_th
      theta2 = vartheta ke kd + gamma_th kd - ke
      theta3 = 1 - vartheta kd
      theta4 = gamma_th kd - ke        (high-SNR limit)

    The outage event is rho_D < (theta1 rho_E + vartheta)/(theta3 -
    theta2 rho_E) while the denominator is positive, and certain beyond.
    theta3 <= 0 means the destination SNDR ceiling cannot reach the
    target rate at any SNR.
    """

    gamma_th: float
    vartheta: float
    theta1: float
    theta2: float
    theta3: float
    theta4: float


@dataclass(frozen=True)
class NumericsConfig:
    """Quadrature order and series truncation for the closed forms.

    ``quad_order`` is the Chebyshev node count; it is deliberately
    independent of the surface element count. ``tail_epsilon`` bounds
    the mass discarded when an integration limit has to be truncated
    (ideal-hardware regimes with no saturation point). ``mc_check``
    asks drivers to cross-validate closed forms against simulation.
    """

    quad_order: int = 100
    series: SeriesControl = field(default_factory=SeriesControl)
    tail_epsilon: float = 1e-12
    theta2_epsilon: float = 1e-12
    mc_check: bool = False

    def __post_init__(self):
        if self.quad_order < 2:
            raise ValueError(f"quad_order must be >= 2, got {self.quad_order}")
        if not 0.0 < self.tail_epsilon < 1e-3:
            raise ValueError(f"tail_epsilon must be in (0, 1e-3), got {self.tail_epsilon}")


DEFAULT_NUMERICS = NumericsConfig()


def theta_coefficients(params: SystemParams) -> ThetaSet:
    """Outage-geometry coefficients for the given scenario."""
    gamma_th = params.gamma_th
    vartheta = gamma_th - 1.0
    kd = params.kappa_d_sum
    ke = params.kappa_e_sum
    return ThetaSet(
        gamma_th=gamma_th,
        vartheta=vartheta,
        theta1=vartheta * ke + gamma_th,
        theta2=vartheta * ke * kd + gamma_th * kd - ke,
        theta3=1.0 - vartheta * kd,
        theta4=gamma_th * kd - ke,
    )


@lru_cache(maxsize=32)
def _chebyshev_rule(q: int):
    """Nodes and weights for int_{-1}^{1} h(phi) dphi ~ sum w_n h(phi_n)."""
    n = np.arange(1, q + 1, dtype=float)
    phi = np.cos((2.0 * n - 1.0) * math.pi / (2.0 * q))
    w = (math.pi / q) * np.sqrt(1.0 - phi * phi)
    return phi, w


def _chebyshev_on_interval(q: int, upper: float):
    """Chebyshev rule on [0, upper] under a quintic endpoint-flattening map.

    Applied to a plain integral, the first-kind rule alone converges
    only like 1/q^2 (its half-period midpoint interpretation sees
    derivative jumps at the interval ends). Substituting
    phi -> (15 phi - 10 phi^3 + 3 phi^5)/8 first makes the transformed
    integrand vanish to high order at both ends, after which the same
    nodes and weights deliver ~1e-12 accuracy by q = 100 on the smooth
    integrands used here.
    """
    phi, w = _chebyshev_rule(q)
    t = (15.0 * phi - 10.0 * phi ** 3 + 3.0 * phi ** 5) / 8.0
    dt = 15.0 * (1.0 - phi * phi) ** 2 / 8.0
    x = np.clip(0.5 * upper * (1.0 + t), 0.0, upper)
    return x, 0.5 * upper * w * dt


@dataclass(frozen=True)
class SopEvaluation:
    """Outage probability with its decomposition.

    ``tail_mass`` is the probability that the eavesdropper gain lies
    beyond the integration limit (outage certain there);
    ``target_saturated`` flags theta3 <= 0, where outage is certain for
    every channel state and the value is exactly 1.
    """

    value: float
    integral: float
    tail_mass: float
    upper_limit: float
    target_saturated: bool


def _sop_region(thetas: ThetaSet, stats: ChannelStats, numerics: NumericsConfig):
    """Integration limit and certain-outage tail mass for the SOP integral."""
    if thetas.theta2 > numerics.theta2_epsilon:
        upper = thetas.theta3 / thetas.theta2
        tail = math.exp(-upper / stats.lambda_e)
    else:
        # No saturation crossing: integrate the exponential out to where
        # the discarded mass is below tail_epsilon.
        upper = stats.lambda_e * math.log(1.0 / numerics.tail_epsilon)
        tail = 0.0
    return upper, tail


def sop_detail(params: SystemParams, stats: ChannelStats,
               numerics: NumericsConfig = DEFAULT_NUMERICS) -> SopEvaluation:
    """Secrecy outage probability, Chebyshev/series closed form."""
    th = theta_coefficients(params)
    if th.theta3 <= 0.0:
        return SopEvaluation(1.0, 0.0, 1.0, 0.0, True)
    upper, tail = _sop_region(th, stats, numerics)
    x, w = _chebyshev_on_interval(numerics.quad_order, upper)
    g = params.snr_d_linear
    lam_e = stats.lambda_e
    total = 0.0
    for xn, wn in zip(x, w):
        denom = th.theta3 - th.theta2 * xn
        if denom <= 0.0:  # at/beyond the saturation crossing: outage certain
            f = 1.0
        else:
            threshold = (th.theta1 * xn + th.vartheta) / denom
            f = cdf_rho_d(threshold, stats, g, numerics.series, method="series")
        total += wn * math.exp(-xn / lam_e) / lam_e * f
    value = min(float(total) + tail, 1.0)
    return SopEvaluation(value, float(total), tail, upper, False)


def sop(params: SystemParams, stats: ChannelStats,
        numerics: NumericsConfig = DEFAULT_NUMERICS) -> float:
    """Secrecy outage probability Pr(R_S < c_th), in [0, 1]."""
    return sop_detail(params, stats, numerics).value


def sop_reference(params: SystemParams, stats: ChannelStats,
                  numerics: NumericsConfig = DEFAULT_NUMERICS) -> float:
    """Adaptive-quadrature evaluation of the same outage integral.

    Independent of the closed form in both the CDF representation
    (Marcum/erfc instead of the gamma series) and the quadrature
    (adaptive instead of Chebyshev).
    """
    th = theta_coefficients(params)
    if th.theta3 <= 0.0:
        return 1.0
    g = params.snr_d_linear
    lam_e = stats.lambda_e

    if th.theta2 > numerics.theta2_epsilon:
        upper = th.theta3 / th.theta2
        tail = math.exp(-upper / lam_e)
    else:
        upper = np.inf
        tail = 0.0

    def integrand(xv: float) -> float:
        denom = th.theta3 - th.theta2 * xv
        if denom <= 0.0:
            f = 1.0
        else:
            f = cdf_rho_d((th.theta1 * xv + th.vartheta) / denom, stats, g, method="marcum")
        return math.exp(-xv / lam_e) / lam_e * f

    total, _ = integrate.quad(integrand, 0.0, upper, limit=300,
                              epsabs=1e-12, epsrel=1e-12)
    return min(total + tail, 1.0)


def sop_asymptotic(params: SystemParams, stats: ChannelStats,
                   numerics: NumericsConfig = DEFAULT_NUMERICS) -> float:
    """High-SNR outage approximation Pr(gamma_D/gamma_E < gamma_th).

    Only defined for theta4 > 0, where the ratio event has a finite
    saturation limit 1/theta4 for the eavesdropper gain.
    """
    th = theta_coefficients(params)
    if th.theta4 <= 0.0:
        raise UnsupportedRegimeError(
            f"sop_asymptotic requires theta4 > 0, got theta4={th.theta4}"
        )
    upper = 1.0 / th.theta4
    tail = math.exp(-upper / stats.lambda_e)
    x, w = _chebyshev_on_interval(numerics.quad_order, upper)
    g = params.snr_d_linear
    lam_e = stats.lambda_e
    gamma_th = th.gamma_th
    total = 0.0
    for xn, wn in zip(x, w):
        denom = 1.0 - th.theta4 * xn
        if denom <= 0.0:
            f = 1.0
        else:
            f = cdf_rho_d(gamma_th * xn / denom, stats, g, numerics.series,
                          method="series")
        total += wn * math.exp(-xn / lam_e) / lam_e * f
    return min(float(total) + tail, 1.0)


def sop_asymptotic_reference(params: SystemParams, stats: ChannelStats) -> float:
    """Adaptive-quadrature twin of :func:`sop_asymptotic`."""
    th = theta_coefficients(params)
    if th.theta4 <= 0.0:
        raise UnsupportedRegimeError(
            f"sop_asymptotic requires theta4 > 0, got theta4={th.theta4}"
        )
    upper = 1.0 / th.theta4
    g = params.snr_d_linear
    lam_e = stats.lambda_e
    gamma_th = th.gamma_th

    def integrand(xv: float) -> float:
        denom = 1.0 - th.theta4 * xv
        if denom <= 0.0:
            f = 1.0
        else:
            f = cdf_rho_d(gamma_th * xv / denom, stats, g, method="marcum")
        return math.exp(-xv / lam_e) / lam_e * f

    total, _ = integrate.quad(integrand, 0.0, upper, limit=300,
                              epsabs=1e-12, epsrel=1e-12)
    return min(total + math.exp(-upper / lam_e), 1.0)


def _rho_d_tail_limit(stats: ChannelStats, snr_d_linear: float, eps: float) -> float:
    # P(rho_D > x) ~ Q((sqrt(x/g) - sqrt(lambda))/sigma); invert at eps.
    z = math.sqrt(2.0 * math.log(1.0 / eps))
    return snr_d_linear * (math.sqrt(stats.lambda_) + math.sqrt(stats.sigma2) * z) ** 2


def destination_rate(params: SystemParams, stats: ChannelStats,
                     numerics: NumericsConfig = DEFAULT_NUMERICS) -> float:
    """Ergodic rate of the destination, E[log2(1 + gamma_D)], bits/s/Hz.

    Chebyshev/series form of (1/ln 2) int (1 - F_{gamma_D}(x))/(1+x) dx
    over [0, 1/kappa_sum]. With ideal destination hardware there is no
    saturation point; the integral is then truncated where the channel
    CCDF falls below tail_epsilon.
    """
    kd = params.kappa_d_sum
    g = params.snr_d_linear
    if kd > 0.0:
        upper = 1.0 / kd
        def ccdf(xv: float) -> float:
            denom = 1.0 - kd * xv
            if denom <= 0.0:  # SNDR cannot exceed the saturation point
                return 0.0
            return ccdf_rho_d(xv / denom, stats, g, numerics.series, method="series")
    else:
        upper = _rho_d_tail_limit(stats, g, numerics.tail_epsilon)
        def ccdf(xv: float) -> float:
            return ccdf_rho_d(xv, stats, g, numerics.series, method="series")
    x, w = _chebyshev_on_interval(numerics.quad_order, upper)
    total = 0.0
    for xn, wn in zip(x, w):
        total += wn * ccdf(xn) / (1.0 + xn)
    return float(total) / math.log(2.0)


def eavesdropper_rate(stats: ChannelStats, kappa_e_sum: float) -> float:
    """Ergodic rate of the eavesdropper, E[log2(1 + gamma_E)], exact.

    Writing the SNDR CCDF P(gamma_E > x) = exp(-x/((1-k x) lambda_e))
    on [0, 1/k) and substituting y = x/(1 - k x) turns the rate integral
    into a difference of scaled exponential integrals:

        ln2 * R_E = e1s(1/((1+k) lambda_e)) - e1s(1/(k lambda_e)),

    with e1s(t) = e^t E1(t); the second term vanishes as k -> 0, giving
    the ideal-hardware rate continuously.
    """
    lam_e = stats.lambda_e
    total = e1_scaled(1.0 / ((1.0 + kappa_e_sum) * lam_e))
    if kappa_e_sum > 0.0:
        total -= e1_scaled(1.0 / (kappa_e_sum * lam_e))
    return total / math.log(2.0)


def eavesdropper_rate_gain_clipped(stats: ChannelStats, kappa_e_sum: float) -> float:
    """Rate of the simpler gain-clipped model E[log2(1 + min(rho_E, 1/k))].

    Exact Ei closed form of int_0^{1/k} e^{-x/lambda_e}/(1+x) dx; clipping
    the gain instead of applying the SNDR map upper-bounds the true
    eavesdropper rate. Kept as an oracle target for the Ei identity and
    to quantify the gap to :func:`eavesdropper_rate`.
    """
    if kappa_e_sum <= 0.0:
        raise UnsupportedRegimeError("gain-clipped rate requires kappa_e_sum > 0")
    lam_e = stats.lambda_e
    mu = 1.0 / (kappa_e_sum * lam_e)
    total = e1_scaled(1.0 / lam_e) - math.exp(-mu) * e1_scaled(1.0 / lam_e + mu)
    return total / math.log(2.0)


@dataclass(frozen=True)
class SecrecyCapacity:
    """Average secrecy capacity split into its two rate terms."""

    value: float
    r_d: float
    r_e: float


def avg_secrecy_capacity(params: SystemParams, stats: ChannelStats,
                         numerics: NumericsConfig = DEFAULT_NUMERICS,
                         ideal_hardware_fallback: bool = False) -> SecrecyCapacity:
    """Average secrecy capacity R_D - R_E (difference of ergodic rates).

    This is the unclipped definition, so it can go negative when the
    eavesdropper's link dominates; the Monte Carlo module estimates both
    this and the zero-clipped definition so the gap is measurable.

    The destination closed form needs a saturation point (kappa sum >
    0); ``ideal_hardware_fallback=True`` enables the tail-truncated
    numeric path for kappa = 0 instead of raising.
    """
    if (params.kappa_d_sum == 0.0 or params.kappa_e_sum == 0.0) and not ideal_hardware_fallback:
        raise UnsupportedRegimeError(
            "closed-form average secrecy capacity requires positive per-link "
            "impairment sums; pass ideal_hardware_fallback=True for the "
            "truncated numeric path"
        )
    r_d = destination_rate(params, stats, numerics)
    r_e = eavesdropper_rate(stats, params.kappa_e_sum)
    return SecrecyCapacity(value=r_d - r_e, r_d=r_d, r_e=r_e)


def avg_secrecy_capacity_reference(params: SystemParams, stats: ChannelStats,
                                   numerics: NumericsConfig = DEFAULT_NUMERICS) -> SecrecyCapacity:
    """Adaptive-quadrature twin of :func:`avg_secrecy_capacity`."""
    kd = params.kappa_d_sum
    ke = params.kappa_e_sum
    g = params.snr_d_linear
    lam_e = stats.lambda_e

    if kd > 0.0:
        upper_d = 1.0 / kd
        def d_integrand(xv: float) -> float:
            denom = 1.0 - kd * xv
            if denom <= 0.0:
                return 0.0
            return ccdf_rho_d(xv / denom, stats, g, method="marcum") / (1.0 + xv)
    else:
        upper_d = _rho_d_tail_limit(stats, g, numerics.tail_epsilon)
        def d_integrand(xv: float) -> float:
            return ccdf_rho_d(xv, stats, g, method="marcum") / (1.0 + xv)
    r_d, _ = integrate.quad(d_integrand, 0.0, upper_d, limit=300,
                            epsabs=1e-12, epsrel=1e-12)
    r_d /= math.log(2.0)

    if ke > 0.0:
        upper_e = 1.0 / ke
        def e_integrand(xv: float) -> float:
            denom = 1.0 - ke * xv
            if denom <= 0.0:
                return 0.0
            return math.exp(-xv / (lam_e * denom)) / (1.0 + xv)
    else:
        upper_e = lam_e * math.log(1.0 / numerics.tail_epsilon)
        def e_integrand(xv: float) -> float:
            return math.exp(-xv / lam_e) / (1.0 + xv)
    r_e, _ = integrate.quad(e_integrand, 0.0, upper_e, limit=300,
                            epsabs=1e-12, epsrel=1e-12)
    r_e /= math.log(2.0)
    return SecrecyCapacity(value=r_d - r_e, r_d=r_d, r_e=r_e)
