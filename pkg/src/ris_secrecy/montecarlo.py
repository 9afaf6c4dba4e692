"""Signal-level Monte Carlo simulator of the wiretap link.

This is the independent ground truth the analytical expressions are
checked against: every trial draws the underlying Rayleigh fading
amplitudes, forms the coherent destination sum X1 = sum_i f_Ri f_Di and
the eavesdropper gain, applies the impairment-saturated SNDR mapping and
evaluates the instantaneous secrecy rate.

Reproducibility contract: estimates are a pure function of
(seed, stream_count, trials). Trials are partitioned over
``stream_count`` counter-based Philox streams (stream i is
``Philox(key=seed).jumped(i)``) and per-stream partial sums are combined
in stream order, so results do not depend on how the streams would be
scheduled.

Eavesdropper channel modes
--------------------------
``rayleigh`` (default) draws X2 from the Rayleigh law the analysis
adopts for the incoherent sum (rho_E exactly exponential with mean
snr_e * N). ``phase_sum`` builds X2 = |sum_i f_Ri f_Ei e^{j delta_i}|
from per-element uniform residual phases instead; its mean power is the
same but the finite-N law is not exactly exponential, which makes the
mode useful for measuring how good the exponential model is.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import SystemParams

_CHUNK = 1 << 18


@dataclass(frozen=True)
class McConfig:
    """Simulation size and reproducibility knobs."""

    trials: int = 1_000_000
    seed: int = 0
    stream_count: int = 4
    eav_mode: str = "rayleigh"

    def __post_init__(self):
        if self.trials < 1_000:
            raise ValueError(f"trials must be >= 1000, got {self.trials}")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must fit in 64 unsigned bits")
        if self.stream_count < 1:
            raise ValueError(f"stream_count must be >= 1, got {self.stream_count}")
        if self.eav_mode not in ("rayleigh", "phase_sum"):
            raise ValueError(f"eav_mode must be 'rayleigh' or 'phase_sum', got {self.eav_mode!r}")


@dataclass(frozen=True)
class TrialOutcome:
    """One channel realisation pushed through the SNDR and rate maps."""

    gamma_d: float
    gamma_e: float
    r_s: float
    rho_d: float
    rho_e: float


@dataclass(frozen=True)
class EstimateWithCI:
    """Point estimate with its Monte Carlo standard error."""

    value: float
    std_error: float
    trials: int
    seed: int


def _stream_rngs(mc: McConfig):
    return [np.random.Generator(np.random.Philox(key=mc.seed).jumped(i))
            for i in range(mc.stream_count)]


def _stream_sizes(trials: int, stream_count: int):
    base, extra = divmod(trials, stream_count)
    return [base + (1 if i < extra else 0) for i in range(stream_count)]


def _rayleigh_amplitudes(rng, shape):
    # Unit average power: amplitude = sqrt(E), E ~ Exp(1).
    return np.sqrt(rng.standard_exponential(shape))


def _draw_rho(params: SystemParams, rng, m: int, eav_mode: str):
    """Draw m realisations of (rho_d, rho_e)."""
    n = params.n_elements
    f_r = _rayleigh_amplitudes(rng, (m, n))
    f_d = _rayleigh_amplitudes(rng, (m, n))
    x1 = (f_r * f_d).sum(axis=1)
    rho_d = params.snr_d_linear * x1 ** 2
    if eav_mode == "rayleigh":
        rho_e = params.snr_e_linear * n * rng.standard_exponential(m)
    else:
        f_e = _rayleigh_amplitudes(rng, (m, n))
        delta = rng.uniform(-math.pi, math.pi, (m, n))
        s = (f_r * f_e * np.exp(1j * delta)).sum(axis=1)
        rho_e = params.snr_e_linear * np.abs(s) ** 2
    return rho_d, rho_e


def _sndr(rho, kappa_sum):
    return rho / (kappa_sum * rho + 1.0)


def sample_trial(params: SystemParams, rng: np.random.Generator,
                 eav_mode: str = "rayleigh") -> TrialOutcome:
    """Draw a single trial; the batch estimators use the same math."""
    rho_d, rho_e = _draw_rho(params, rng, 1, eav_mode)
    rho_d = float(rho_d[0])
    rho_e = float(rho_e[0])
    gamma_d = _sndr(rho_d, params.kappa_d_sum)
    gamma_e = _sndr(rho_e, params.kappa_e_sum)
    r_s = max(math.log2((1.0 + gamma_d) / (1.0 + gamma_e)), 0.0)
    return TrialOutcome(gamma_d=gamma_d, gamma_e=gamma_e, r_s=r_s,
                        rho_d=rho_d, rho_e=rho_e)


def simulate_metrics(params: SystemParams, mc: McConfig) -> dict:
    """One sampling pass, all scalar metrics.

    Returns estimates keyed ``sop``, ``asc_eq19`` (difference of ergodic
    rates, may be negative) and ``asc_eq6`` (mean of the zero-clipped
    secrecy rate, always >= asc_eq19).
    """
    gamma_th = params.gamma_th
    kd = params.kappa_d_sum
    ke = params.kappa_e_sum
    n_out = 0
    s19 = s19_sq = 0.0
    s6 = s6_sq = 0.0
    for rng, size in zip(_stream_rngs(mc), _stream_sizes(mc.trials, mc.stream_count)):
        done = 0
        while done < size:
            m = min(_CHUNK, size - done)
            rho_d, rho_e = _draw_rho(params, rng, m, mc.eav_mode)
            gd = _sndr(rho_d, kd)
            ge = _sndr(rho_e, ke)
            # R_S < C_th  <=>  1 + gamma_D < gamma_th (1 + gamma_E), exact
            # for any positive threshold rate.
            n_out += int(((1.0 + gd) < gamma_th * (1.0 + ge)).sum())
            v = np.log2(1.0 + gd) - np.log2(1.0 + ge)
            s19 += v.sum()
            s19_sq += (v * v).sum()
            np.maximum(v, 0.0, out=v)
            s6 += v.sum()
            s6_sq += (v * v).sum()
            done += m
    t = mc.trials
    p = n_out / t
    out = {"sop": EstimateWithCI(p, math.sqrt(p * (1.0 - p) / t), t, mc.seed)}
    for key, s, ssq in (("asc_eq19", s19, s19_sq), ("asc_eq6", s6, s6_sq)):
        mean = float(s) / t
        var = max(float(ssq) / t - mean * mean, 0.0)
        out[key] = EstimateWithCI(mean, math.sqrt(var / t), t, mc.seed)
    return out


def estimate_sop(params: SystemParams, mc: McConfig) -> EstimateWithCI:
    """Fraction of trials whose secrecy rate falls below c_th."""
    return simulate_metrics(params, mc)["sop"]


def estimate_asc(params: SystemParams, mc: McConfig,
                 definition: str = "eq19") -> EstimateWithCI:
    """Average secrecy capacity estimate.

    ``eq19``: mean of log2(1+gamma_D) - log2(1+gamma_E) (difference of
    ergodic rates, matching the analytical closed form). ``eq6``: mean
    of the zero-clipped instantaneous secrecy rate.
    """
    if definition not in ("eq19", "eq6"):
        raise ValueError(f"definition must be 'eq19' or 'eq6', got {definition!r}")
    return simulate_metrics(params, mc)["asc_eq19" if definition == "eq19" else "asc_eq6"]


def sample_quantity(quantity: str, params: SystemParams, mc: McConfig) -> np.ndarray:
    """All trial values of one per-trial quantity (unsorted)."""
    if quantity not in ("rho_d", "rho_e", "gamma_d", "gamma_e", "x1"):
        raise ValueError(f"unknown quantity {quantity!r}")
    parts = []
    for rng, size in zip(_stream_rngs(mc), _stream_sizes(mc.trials, mc.stream_count)):
        done = 0
        while done < size:
            m = min(_CHUNK, size - done)
            rho_d, rho_e = _draw_rho(params, rng, m, mc.eav_mode)
            if quantity == "rho_d":
                parts.append(rho_d)
            elif quantity == "rho_e":
                parts.append(rho_e)
            elif quantity == "gamma_d":
                parts.append(_sndr(rho_d, params.kappa_d_sum))
            elif quantity == "gamma_e":
                parts.append(_sndr(rho_e, params.kappa_e_sum))
            else:
                parts.append(np.sqrt(rho_d / params.snr_d_linear))
            done += m
    return np.concatenate(parts)


def empirical_cdf(quantity: str, params: SystemParams, mc: McConfig):
    """Empirical CDF of a per-trial quantity.

    Returns ``(x, f_hat)`` with x the sorted samples and f_hat the step
    heights i/n; the usual validation surface for the analytical
    channel laws.
    """
    x = np.sort(sample_quantity(quantity, params, mc))
    f_hat = np.arange(1, x.size + 1, dtype=float) / x.size
    return x, f_hat


def ks_distance(sorted_samples: np.ndarray, cdf) -> float:
    """One-sample Kolmogorov-Smirnov statistic against a model CDF.

    ``cdf`` must accept the sorted sample array and return model CDF
    values elementwise.
    """
    n = sorted_samples.size
    f = np.asarray(cdf(sorted_samples), dtype=float)
    i = np.arange(1, n + 1, dtype=float)
    return float(max(np.max(i / n - f), np.max(f - (i - 1.0) / n)))


def estimate_mean_sndr(params: SystemParams, mc: McConfig, link: str = "d",
                       mode: str = "folded", n_symbols: int = 4096) -> EstimateWithCI:
    """Mean SNDR, with the distortion noise either folded or sampled.

    ``folded`` applies the deterministic SNDR map rho/(kappa rho + 1) to
    each channel draw. ``sampled`` draws the transmit/receive distortion
    and AWGN as complex Gaussians per symbol and measures the ratio of
    received signal power to distortion-plus-noise power over
    ``n_symbols`` symbols (bias-corrected for the inverted sample mean).
    Channel draws consume dedicated streams, so both modes see identical
    channels for a given seed and the comparison isolates the folding
    step itself.
    """
    if link not in ("d", "e"):
        raise ValueError(f"link must be 'd' or 'e', got {link!r}")
    if mode not in ("folded", "sampled"):
        raise ValueError(f"mode must be 'folded' or 'sampled', got {mode!r}")
    kappa_t2 = params.kappa_d_t2 if link == "d" else params.kappa_e_t2
    kappa_r2 = params.kappa_d_r2 if link == "d" else params.kappa_e_r2
    noise_rngs = [np.random.Generator(np.random.Philox(key=mc.seed).jumped(mc.stream_count + i))
                  for i in range(mc.stream_count)]
    s = s_sq = 0.0
    chunk = max(1, _CHUNK // max(n_symbols, 1) * 8)
    for idx, (rng, size) in enumerate(zip(_stream_rngs(mc),
                                          _stream_sizes(mc.trials, mc.stream_count))):
        done = 0
        while done < size:
            m = min(chunk, size - done)
            rho_d, rho_e = _draw_rho(params, rng, m, mc.eav_mode)
            rho = rho_d if link == "d" else rho_e
            if mode == "folded":
                g = _sndr(rho, kappa_t2 + kappa_r2)
            else:
                # Unit-power symbols through channel power rho (noise-
                # normalised), so the per-symbol disturbance
                # h*eta_t + eta_r + n is CN(0, rho*kappa_t2 + rho*kappa_r2 + 1).
                w_var = rho * (kappa_t2 + kappa_r2) + 1.0
                nrng = noise_rngs[idx]
                w = 0.5 * w_var[:, None] * (
                    nrng.standard_normal((m, n_symbols)) ** 2
                    + nrng.standard_normal((m, n_symbols)) ** 2
                )
                w_bar = w.mean(axis=1) * (n_symbols / (n_symbols - 1.0))
                g = rho / w_bar
            s += g.sum()
            s_sq += (g * g).sum()
            done += m
    t = mc.trials
    mean = float(s) / t
    var = max(float(s_sq) / t - mean * mean, 0.0)
    return EstimateWithCI(mean, math.sqrt(var / t), t, mc.seed)
