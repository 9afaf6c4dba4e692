"""Effective-channel statistics of the RIS-aided wiretap link.

The legitimate receiver sees the coherent sum X1 = sum_i f_Ri f_Di of N
Rayleigh amplitude products (phase-aligned by the surface), modelled as
Gaussian with mean N pi/4 and variance N (1 - pi^2/16); rho_D =
snr_d * X1^2 then follows a noncentral-chi-square-type law whose CDF has
both a Marcum-Q closed form and an incomplete-gamma series form. The
eavesdropper sees an incoherent sum, so rho_E = snr_e * X2^2 is
exponential with mean lambda_e = snr_e * N.

Everything here is a pure function of immutable inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special as sc

from .specfun import (
    ConvergenceError,
    DEFAULT_SERIES,
    SeriesControl,
    lower_inc_gamma,
    upper_inc_gamma,
)


def db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


@dataclass(frozen=True)
class LinkGeometry:
    """Physical scenario behind the average SNRs.

    p_s      transmit power
    n0       noise power
    d_sr     source-to-surface distance [m]
    d_rd     surface-to-destination distance [m]
    d_re     surface-to-eavesdropper distance [m]
    chi      path-loss exponent
    """

    p_s: float
    n0: float
    d_sr: float
    d_rd: float
    d_re: float
    chi: float

    def snr_d_db(self) -> float:
        return 10.0 * math.log10(self.p_s / ((self.d_sr * self.d_rd) ** self.chi * self.n0))

    def snr_e_db(self) -> float:
        return 10.0 * math.log10(self.p_s / ((self.d_sr * self.d_re) ** self.chi * self.n0))


@dataclass(frozen=True)
class SystemParams:
    """Scenario definition shared by the analytical and simulation paths.

    Hardware-impairment levels are the *squared* kappa values; per link
    the transmit and receive levels add in the SNDR denominator, which
    therefore saturates at 1/(kappa_t^2 + kappa_r^2).
    """

    n_elements: int
    kappa_d_t2: float = 0.0
    kappa_d_r2: float = 0.0
    kappa_e_t2: float = 0.0
    kappa_e_r2: float = 0.0
    snr_d_db: float = 0.0
    snr_e_db: float = 0.0
    c_th: float = 1.0
    geometry: LinkGeometry | None = None

    def __post_init__(self):
        if int(self.n_elements) != self.n_elements or self.n_elements < 1:
            raise ValueError(f"n_elements must be a positive integer, got {self.n_elements}")
        for name in ("kappa_d_t2", "kappa_d_r2", "kappa_e_t2", "kappa_e_r2"):
            v = getattr(self, name)
            if not 0.0 <= v < 1.0:
                raise ValueError(f"{name} must be in [0, 1), got {v}")
        if not self.c_th > 0.0:
            raise ValueError(f"c_th must be > 0, got {self.c_th}")
        if self.geometry is not None:
            # The dB fields are the single source of truth; a supplied
            # geometry must reproduce them exactly (up to rounding).
            for name, want in (
                ("snr_d_db", self.geometry.snr_d_db()),
                ("snr_e_db", self.geometry.snr_e_db()),
            ):
                have = getattr(self, name)
                if abs(have - want) > 1e-9 * max(1.0, abs(want)):
                    raise ValueError(
                        f"{name}={have} inconsistent with geometry "
                        f"(path-loss value {want})"
                    )

    @classmethod
    def from_geometry(cls, n_elements: int, geometry: LinkGeometry, *,
                      c_th: float = 1.0, **kappas) -> "SystemParams":
        """Build params with the SNRs derived from the path-loss geometry."""
        return cls(
            n_elements=n_elements,
            snr_d_db=geometry.snr_d_db(),
            snr_e_db=geometry.snr_e_db(),
            c_th=c_th,
            geometry=geometry,
            **kappas,
        )

    @property
    def kappa_d_sum(self) -> float:
        return self.kappa_d_t2 + self.kappa_d_r2

    @property
    def kappa_e_sum(self) -> float:
        return self.kappa_e_t2 + self.kappa_e_r2

    @property
    def snr_d_linear(self) -> float:
        return db_to_linear(self.snr_d_db)

    @property
    def snr_e_linear(self) -> float:
        return db_to_linear(self.snr_e_db)

    @property
    def gamma_th(self) -> float:
        return 2.0 ** self.c_th


@dataclass(frozen=True)
class ChannelStats:
    """Derived distribution parameters of the two effective channels.

    lambda_    squared mean of X1, (N pi / 4)^2
    sigma2     variance of X1, N (1 - pi^2 / 16)
    lambda_e   mean of rho_E, snr_e_linear * N
    """

    lambda_: float
    sigma2: float
    lambda_e: float

    def __post_init__(self):
        for name in ("lambda_", "sigma2", "lambda_e"):
            if not getattr(self, name) > 0.0:
                raise ValueError(f"{name} must be > 0, got {getattr(self, name)}")


def derive_stats(params: SystemParams, *, printed_sigma2: bool = False) -> ChannelStats:
    """Channel statistics from the scenario parameters.

    The variance of a single unit-power Rayleigh amplitude product is
    1 - pi^2/16, so the coherent sum of n_elements of them has variance
    N (1 - pi^2/16); ``printed_sigma2=True`` selects the squared-factor
    variant N (1 - pi^2/16)^2 seen in some write-ups of this model (it
    does not match the moments of the simulated channel and exists for
    comparison only).
    """
    n = params.n_elements
    lam = (n * math.pi / 4.0) ** 2
    unit_var = 1.0 - math.pi ** 2 / 16.0
    sigma2 = n * (unit_var ** 2 if printed_sigma2 else unit_var)
    return ChannelStats(lambda_=lam, sigma2=sigma2, lambda_e=params.snr_e_linear * n)


def _poisson_mixture_weights(delta_half: float, ctl: SeriesControl):
    """Poisson(lambda/(2 sigma^2)) weights of the chi-square mixture.

    Yields (k, weight) until the cumulative weight is within rel_tol of
    one; raises if max_terms is hit first.
    """
    w = math.exp(-delta_half)
    cum = 0.0
    for k in range(ctl.max_terms):
        yield k, w
        cum += w
        if 1.0 - cum < ctl.rel_tol:
            return
        w *= delta_half / (k + 1)
    raise ConvergenceError("rho_D mixture series", ctl.max_terms, 1.0 - cum)


def pdf_rho_d(x: float, stats: ChannelStats, snr_d_linear: float,
              ctl: SeriesControl = DEFAULT_SERIES) -> float:
    """Density of rho_D = snr_d * X1^2 (series form).

    f(x) = sum_k  lambda^k e^{-lambda/(2 s2)} x^{k-1/2} e^{-x/(2 g s2)}
                  / (k! Gamma(k+1/2) (2 s2)^{2k+1/2} g^{k+1/2}).

    The k = 0 term carries an integrable x^{-1/2} singularity at the
    origin (the x^{-1/4} prefactor and the diverging I_{-1/2} factor of
    the product form combine to x^{-1/2}); evaluating through the series
    keeps every term finite for x > 0 instead of multiplying a vanishing
    power into a diverging Bessel limit.
    """
    if x < 0.0:
        raise ValueError(f"pdf_rho_d requires x >= 0, got x={x}")
    if x == 0.0:
        return math.inf
    g = snr_d_linear
    s2 = stats.sigma2
    delta_half = stats.lambda_ / (2.0 * s2)
    scale = 2.0 * g * s2
    u = x / scale
    total = 0.0
    for k, w in _poisson_mixture_weights(delta_half, ctl):
        # w * Gamma-density(k+1/2, scale=2 g s2) at x
        log_dens = (k - 0.5) * math.log(u) - u - math.lgamma(k + 0.5) - math.log(scale)
        total += w * math.exp(log_dens)
    return total


def cdf_rho_d(x, stats: ChannelStats, snr_d_linear: float,
              ctl: SeriesControl = DEFAULT_SERIES, method: str = "marcum"):
    """CDF of rho_D; the two methods are independent evaluation routes.

    ``marcum``  F(x) = 1 - Q_{1/2}(sqrt(lambda)/sigma, sqrt(x/(g sigma^2))),
                erfc-based, accepts scalars or arrays.
    ``series``  Poisson mixture of regularised lower incomplete gammas,
                scalar only.
    """
    if method == "marcum":
        return _cdf_rho_d_marcum(x, stats, snr_d_linear)
    if method == "series":
        return _cdf_rho_d_series(float(x), stats, snr_d_linear, ctl)
    raise ValueError(f"unknown method {method!r}, expected 'marcum' or 'series'")


def _cdf_rho_d_marcum(x, stats: ChannelStats, snr_d_linear: float):
    xs = np.asarray(x, dtype=float)
    if np.any(xs < 0.0):
        raise ValueError("cdf_rho_d requires x >= 0")
    a = math.sqrt(stats.lambda_ / stats.sigma2)
    b = np.sqrt(xs / (snr_d_linear * stats.sigma2))
    inv_sqrt2 = 1.0 / math.sqrt(2.0)
    q = 0.5 * (sc.erfc((b - a) * inv_sqrt2) + sc.erfc((b + a) * inv_sqrt2))
    out = 1.0 - q
    return float(out) if np.isscalar(x) or np.ndim(x) == 0 else out


def _cdf_rho_d_series(x: float, stats: ChannelStats, snr_d_linear: float,
                      ctl: SeriesControl) -> float:
    if x < 0.0:
        raise ValueError(f"cdf_rho_d requires x >= 0, got x={x}")
    if x == 0.0:
        return 0.0
    delta_half = stats.lambda_ / (2.0 * stats.sigma2)
    u = x / (2.0 * snr_d_linear * stats.sigma2)
    total = 0.0
    for k, w in _poisson_mixture_weights(delta_half, ctl):
        total += w * lower_inc_gamma(k + 0.5, u, ctl) / math.gamma(k + 0.5)
    return min(total, 1.0)


def ccdf_rho_d(x: float, stats: ChannelStats, snr_d_linear: float,
               ctl: SeriesControl = DEFAULT_SERIES, method: str = "marcum") -> float:
    """P(rho_D > x), evaluated without the 1 - CDF cancellation.

    The series route sums upper incomplete gammas, which keeps deep
    upper-tail values accurate; the marcum route is Q_{1/2} directly.
    """
    if x < 0.0:
        raise ValueError(f"ccdf_rho_d requires x >= 0, got x={x}")
    if method == "marcum":
        a = math.sqrt(stats.lambda_ / stats.sigma2)
        b = math.sqrt(x / (snr_d_linear * stats.sigma2))
        inv_sqrt2 = 1.0 / math.sqrt(2.0)
        return 0.5 * (math.erfc((b - a) * inv_sqrt2) + math.erfc((b + a) * inv_sqrt2))
    if method != "series":
        raise ValueError(f"unknown method {method!r}, expected 'marcum' or 'series'")
    if x == 0.0:
        return 1.0
    delta_half = stats.lambda_ / (2.0 * stats.sigma2)
    u = x / (2.0 * snr_d_linear * stats.sigma2)
    total = 0.0
    for k, w in _poisson_mixture_weights(delta_half, ctl):
        total += w * upper_inc_gamma(k + 0.5, u, ctl) / math.gamma(k + 0.5)
    return min(total, 1.0)


def pdf_rho_e(x: float, stats: ChannelStats) -> float:
    """Density of the exponential eavesdropper channel gain rho_E."""
    if x < 0.0:
        raise ValueError(f"pdf_rho_e requires x >= 0, got x={x}")
    return math.exp(-x / stats.lambda_e) / stats.lambda_e


def cdf_rho_e(x: float, stats: ChannelStats) -> float:
    if x < 0.0:
        raise ValueError(f"cdf_rho_e requires x >= 0, got x={x}")
    return -math.expm1(-x / stats.lambda_e)


def cdf_gamma_d(x: float, params: SystemParams, stats: ChannelStats,
                ctl: SeriesControl = DEFAULT_SERIES, method: str = "series") -> float:
    """CDF of the destination SNDR gamma_D = rho_D / (kappa_sum rho_D + 1).

    For x below the saturation point 1/kappa_sum this is
    1 - sum_k w_k Gamma(k+1/2, y/(2 g sigma^2)) / Gamma(k+1/2) with
    y = x / (1 - x kappa_sum); at or above it the SNDR bound makes the
    event certain, so the CDF is exactly 1.
    """
    if x < 0.0:
        raise ValueError(f"cdf_gamma_d requires x >= 0, got x={x}")
    ks = params.kappa_d_sum
    if ks > 0.0 and x >= 1.0 / ks:
        return 1.0
    y = x / (1.0 - x * ks)
    return 1.0 - ccdf_rho_d(y, stats, params.snr_d_linear, ctl, method=method)
