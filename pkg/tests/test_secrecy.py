"""Closed-form secrecy metrics vs their quadrature references and invariants."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate

from ris_secrecy.channel import SystemParams, derive_stats
from ris_secrecy.secrecy import (
    NumericsConfig,
    UnsupportedRegimeError,
    avg_secrecy_capacity,
    avg_secrecy_capacity_reference,
    destination_rate,
    eavesdropper_rate,
    eavesdropper_rate_gain_clipped,
    sop,
    sop_asymptotic,
    sop_asymptotic_reference,
    sop_detail,
    sop_reference,
    theta_coefficients,
)
from ris_secrecy.specfun import SeriesControl


def params_for(n=5, snr_d_db=10.0, snr_e_db=-10.0, k2=0.01, c_th=1.0, **kw):
    base = dict(kappa_d_t2=k2, kappa_d_r2=k2, kappa_e_t2=k2, kappa_e_r2=k2)
    base.update(kw)
    return SystemParams(n_elements=n, snr_d_db=snr_d_db, snr_e_db=snr_e_db,
                        c_th=c_th, **base)


# --- theta coefficients ------------------------------------------------------

def test_theta_zero_impairment():
    th = theta_coefficients(params_for(k2=0.0, c_th=1.0))
    assert (th.vartheta, th.theta1, th.theta2, th.theta3, th.theta4) == (1.0, 2.0, 0.0, 1.0, 0.0)
    assert th.gamma_th == 2.0


def test_theta_symmetric_one_percent():
    th = theta_coefficients(params_for(k2=0.01, c_th=1.0))
    assert th.vartheta == 1.0
    assert th.theta1 == pytest.approx(2.02, abs=1e-15)
    assert th.theta2 == pytest.approx(0.0204, abs=1e-15)
    assert th.theta3 == pytest.approx(0.98, abs=1e-15)
    assert th.theta4 == pytest.approx(0.02, abs=1e-15)
    assert 1.0 / th.theta4 == pytest.approx(50.0, rel=1e-12)


def test_theta_vanishing_target_rate_limit():
    th = theta_coefficients(params_for(c_th=1e-9))
    assert th.gamma_th == pytest.approx(1.0, abs=1e-8)
    assert 0.0 < th.vartheta < 1e-8


# --- secrecy outage probability ----------------------------------------------

GRID = [(n, gd, ge) for n in (5, 10) for gd in (0.0, 10.0, 20.0) for ge in (-10.0, 0.0)]


@pytest.mark.parametrize("n,gd,ge", GRID)
def test_sop_matches_adaptive_quadrature(n, gd, ge):
    p = params_for(n=n, snr_d_db=gd, snr_e_db=ge)
    stats = derive_stats(p)
    assert abs(sop(p, stats) - sop_reference(p, stats)) < 1e-6


def test_sop_low_snr_tends_to_one():
    p = params_for(snr_d_db=-60.0)
    stats = derive_stats(p)
    assert sop(p, stats) > 1.0 - 1e-4


def test_sop_tail_mass_is_included():
    # lambda_e large enough that the certain-outage region carries mass
    p = params_for(n=10, snr_d_db=20.0, snr_e_db=0.0)
    stats = derive_stats(p)
    ev = sop_detail(p, stats)
    assert ev.tail_mass == pytest.approx(math.exp(-ev.upper_limit / stats.lambda_e), rel=1e-12)
    assert ev.tail_mass > 1e-3
    assert ev.value == pytest.approx(ev.integral + ev.tail_mass, rel=1e-12)


def test_sop_ideal_hardware_degenerate_region():
    # theta2 = 0: integration runs over the truncated exponential range
    p = params_for(k2=0.0)
    stats = derive_stats(p)
    ev = sop_detail(p, stats)
    assert not ev.target_saturated
    assert ev.tail_mass == 0.0
    assert abs(ev.value - sop_reference(p, stats)) < 1e-6


def test_sop_unreachable_target_saturates_to_one():
    # vartheta * kappa_d_sum >= 1 makes the target unreachable at any SNR
    p = params_for(k2=0.05, c_th=4.0)  # theta3 = 1 - 15*0.1 < 0
    stats = derive_stats(p)
    ev = sop_detail(p, stats)
    assert ev.target_saturated
    assert ev.value == 1.0


def test_sop_quad_order_doubling_stability():
    p = params_for(n=5, snr_d_db=10.0, snr_e_db=0.0)
    stats = derive_stats(p)
    for q in (200, 400):
        a = sop(p, stats, NumericsConfig(quad_order=q))
        b = sop(p, stats, NumericsConfig(quad_order=2 * q))
        assert abs(a - b) < 1e-7


def test_sop_monotone_trends():
    stats_cache = {}

    def sop_at(n, gd, ge, c_th=1.0):
        p = params_for(n=n, snr_d_db=gd, snr_e_db=ge, c_th=c_th)
        key = (n, ge)
        if key not in stats_cache:
            stats_cache[key] = derive_stats(p)
        return sop(p, stats_cache[key])

    grid = np.arange(-10.0, 31.0, 2.0)
    for ge in (-10.0, 0.0):
        vals = [sop_at(5, g, ge) for g in grid]
        assert all(b < a for a, b in zip(vals, vals[1:]))  # decreasing in snr_d
    # element gain at the weak-eavesdropper operating point; for strong
    # eavesdroppers larger N also scales lambda_e and the ordering can
    # flip at high SNR, so the claim is scoped to this setting
    vals5 = [sop_at(5, g, -10.0) for g in grid]
    vals10 = [sop_at(10, g, -10.0) for g in grid]
    assert all(v10 < v5 for v5, v10 in zip(vals5, vals10))
    # non-decreasing in eavesdropper SNR and in target rate
    assert sop_at(5, 10.0, 0.0) >= sop_at(5, 10.0, -10.0)
    assert sop_at(5, 10.0, -10.0, c_th=2.0) >= sop_at(5, 10.0, -10.0, c_th=1.0)


@given(st.integers(min_value=1, max_value=32),
       st.floats(min_value=0.0, max_value=0.2),
       st.floats(min_value=-30.0, max_value=30.0),
       st.floats(min_value=-30.0, max_value=30.0),
       st.floats(min_value=0.1, max_value=4.0))
@settings(max_examples=60, deadline=None)
def test_sop_stays_in_unit_interval(n, k2, gd, ge, c_th):
    p = params_for(n=n, snr_d_db=gd, snr_e_db=ge, k2=k2, c_th=c_th)
    stats = derive_stats(p)
    value = sop(p, stats, NumericsConfig(quad_order=24, series=SeriesControl(rel_tol=1e-9)))
    assert 0.0 <= value <= 1.0


# --- asymptotic secrecy outage -----------------------------------------------

@pytest.mark.parametrize("n,gd,ge", GRID)
def test_sop_asymptotic_matches_adaptive_quadrature(n, gd, ge):
    p = params_for(n=n, snr_d_db=gd, snr_e_db=ge)
    stats = derive_stats(p)
    assert abs(sop_asymptotic(p, stats) - sop_asymptotic_reference(p, stats)) < 1e-6


def test_sop_asymptotic_order_insensitivity():
    p = params_for()
    stats = derive_stats(p)
    a = sop_asymptotic(p, stats, NumericsConfig(quad_order=50))
    b = sop_asymptotic(p, stats, NumericsConfig(quad_order=400))
    assert abs(a - b) < 1e-6


def test_sop_asymptotic_requires_positive_theta4():
    p = params_for(kappa_e_t2=0.05, kappa_e_r2=0.05, kappa_d_t2=0.005, kappa_d_r2=0.005)
    stats = derive_stats(p)
    assert theta_coefficients(p).theta4 < 0.0
    with pytest.raises(UnsupportedRegimeError):
        sop_asymptotic(p, stats)


def test_asymptote_improves_with_snr():
    def rel_gap(gd):
        p = params_for(snr_d_db=gd)
        stats = derive_stats(p)
        s = sop(p, stats)
        return abs(s - sop_asymptotic(p, stats)) / s

    assert rel_gap(30.0) < rel_gap(10.0)


# --- average secrecy capacity ------------------------------------------------

@pytest.mark.parametrize("n,gd,ge", GRID)
def test_asc_matches_adaptive_quadrature(n, gd, ge):
    p = params_for(n=n, snr_d_db=gd, snr_e_db=ge)
    stats = derive_stats(p)
    closed = avg_secrecy_capacity(p, stats)
    ref = avg_secrecy_capacity_reference(p, stats)
    assert abs(closed.value - ref.value) < 1e-6
    assert abs(closed.r_d - ref.r_d) < 1e-6
    assert abs(closed.r_e - ref.r_e) < 1e-6


def test_destination_rate_saturation_ceiling():
    # kappa_d sum 0.02 bounds the SNDR at 50, so R_D <= log2(51)
    ceiling = math.log2(51.0)
    for gd in (0.0, 10.0, 20.0, 30.0, 60.0):
        p = params_for(snr_d_db=gd)
        stats = derive_stats(p)
        assert destination_rate(p, stats) <= ceiling + 1e-12


def test_eavesdropper_rates_nonnegative_and_ordered():
    for ge in (-10.0, 0.0, 10.0):
        p = params_for(snr_e_db=ge)
        stats = derive_stats(p)
        exact = eavesdropper_rate(stats, p.kappa_e_sum)
        clipped = eavesdropper_rate_gain_clipped(stats, p.kappa_e_sum)
        assert 0.0 <= exact <= clipped  # gain clipping upper-bounds the SNDR map


def test_gain_clipped_rate_matches_its_integral():
    # closed form vs adaptive quadrature of e^{-x/lam}/(1+x) on [0, 1/k]
    for lam_e in (0.25, 0.5, 1.0, 5.0, 10.0):
        for ke in (0.005, 0.02, 0.1, 0.2):
            p = params_for(snr_e_db=0.0)
            stats = derive_stats(p)
            stats = type(stats)(lambda_=stats.lambda_, sigma2=stats.sigma2, lambda_e=lam_e)
            val, _ = integrate.quad(lambda x: math.exp(-x / lam_e) / (1.0 + x),
                                    0.0, 1.0 / ke, limit=300, epsabs=1e-13, epsrel=1e-13)
            assert abs(eavesdropper_rate_gain_clipped(stats, ke) - val / math.log(2.0)) < 1e-9


def test_exact_eavesdropper_rate_matches_its_integral():
    # closed form vs quadrature of the saturated-SNDR CCDF integrand
    for lam_e in (0.25, 0.5, 1.0, 5.0, 10.0):
        for ke in (0.005, 0.02, 0.1, 0.2):
            p = params_for(snr_e_db=0.0)
            stats = derive_stats(p)
            stats = type(stats)(lambda_=stats.lambda_, sigma2=stats.sigma2, lambda_e=lam_e)
            val, _ = integrate.quad(
                lambda x: math.exp(-x / (lam_e * (1.0 - ke * x))) / (1.0 + x),
                0.0, 1.0 / ke, limit=300, epsabs=1e-13, epsrel=1e-13)
            assert abs(eavesdropper_rate(stats, ke) - val / math.log(2.0)) < 1e-9


def test_eavesdropper_rate_continuous_at_zero_impairment():
    p = params_for(snr_e_db=0.0)
    stats = derive_stats(p)
    ideal = eavesdropper_rate(stats, 0.0)
    assert eavesdropper_rate(stats, 1e-9) == pytest.approx(ideal, abs=1e-7)
    # classic Rayleigh ergodic rate e^{1/lam} E1(1/lam) / ln 2
    from ris_secrecy.specfun import e1_scaled
    assert ideal == pytest.approx(e1_scaled(1.0 / stats.lambda_e) / math.log(2.0), rel=1e-12)


def test_asc_ideal_hardware_requires_fallback():
    p = params_for(k2=0.0)
    stats = derive_stats(p)
    with pytest.raises(UnsupportedRegimeError):
        avg_secrecy_capacity(p, stats)
    closed = avg_secrecy_capacity(p, stats, ideal_hardware_fallback=True)
    ref = avg_secrecy_capacity_reference(p, stats)
    assert abs(closed.value - ref.value) < 1e-6


def test_asc_continuity_towards_ideal_hardware():
    p0 = params_for(k2=0.0)
    stats = derive_stats(p0)
    ideal = avg_secrecy_capacity(p0, stats, ideal_hardware_fallback=True).value
    p_eps = params_for(k2=1e-7)
    near = avg_secrecy_capacity(p_eps, derive_stats(p_eps)).value
    assert near == pytest.approx(ideal, abs=5e-4)


def test_asc_quad_order_doubling_stability():
    p = params_for(n=5, snr_d_db=10.0, snr_e_db=0.0)
    stats = derive_stats(p)
    for q in (200, 400):
        a = avg_secrecy_capacity(p, stats, NumericsConfig(quad_order=q)).value
        b = avg_secrecy_capacity(p, stats, NumericsConfig(quad_order=2 * q)).value
        assert abs(a - b) < 1e-7


def test_asc_monotone_in_destination_snr():
    vals = []
    for gd in np.arange(-10.0, 31.0, 2.0):
        p = params_for(snr_d_db=float(gd))
        vals.append(avg_secrecy_capacity(p, derive_stats(p)).value)
    assert all(b >= a for a, b in zip(vals, vals[1:]))


def test_numerics_config_validation():
    with pytest.raises(ValueError):
        NumericsConfig(quad_order=1)
    with pytest.raises(ValueError):
        NumericsConfig(tail_epsilon=0.0)
