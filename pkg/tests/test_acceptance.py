"""Acceptance suite: one test (pass/fail line) per primary criterion.

Criteria 3, 6 and 8 are split into sub-criteria where the verification
paths have measurably different accuracy; the honest state of each split
is recorded here rather than papered over with loosened tolerances:

* 3a (most probable outcomes) passes the flat 5% gate; 3b (outcomes
  displaced by one standard deviation) does not — the second-order
  expansion's intrinsic error grows as phi*sqrt(N) off the mean and
  reaches ~12% at the largest grid point.  3b is expected to fail.
* 6a (Monte Carlo per-mode means) passes at 3 standard errors; 6b
  (variances) fails by ~3-4 standard errors because the second-order
  variance formulas carry a ~1.6% truncation bias that 1e5 samples
  resolve.  6b is expected to fail.
* 8a/8b (grid structure and the most-probable-outcome law) pass; 8c
  (alkali model at d=75 reaching 0.4 +/- 0.05) fails — the numeric
  minimum of that curve is 0.3135.  8c is expected to fail.
"""

import math
import time

import numpy as np
import pytest
from scipy.integrate import quad

from spinsq import (
    ALKALI,
    REIDC,
    EnsembleSpec,
    MeasurementOutcome,
    ProbeConfig,
    compare_report,
    css_log_weights,
    eta_optimal,
    fock_posterior,
    g1,
    g2,
    g3,
    intensity_moments_approx,
    intensity_moments_exact,
    most_probable_outcome,
    posterior_weights,
    sample_outcome,
    table1,
    xi_closed_form,
    xi_most_probable,
    xi_noisy,
)
from spinsq.backaction import _log_series


# ---------------------------------------------------------------------------
# 1. planner reproduces the published operating points
# ---------------------------------------------------------------------------

def test_criterion_1_planner_table():
    t0 = time.perf_counter()
    rows = {r.name[:2].lower(): r for r in table1()}
    elapsed = time.perf_counter() - t0
    eu, pr = rows["eu"], rows["pr"]

    assert eu.xi_prime_sq == pytest.approx(0.50, abs=0.01)
    assert pr.xi_prime_sq == pytest.approx(0.16, abs=0.01)
    assert eu.eta == pytest.approx(0.27, abs=0.005)
    assert pr.eta == pytest.approx(0.32, abs=0.005)
    assert eu.xi_prime_db == pytest.approx(3.0, abs=0.1)
    assert pr.xi_prime_db == pytest.approx(8.0, abs=0.1)
    # cross-section and atom number within a factor 2 of the references
    for got, ref in [
        (eu.sigma, 1.2e-14),
        (pr.sigma, 2.2e-13),
        (eu.n_atoms, 3e11),
        (pr.n_atoms, 6e10),
    ]:
        assert 0.5 < got / ref < 2.0
    assert elapsed < 1.0


# ---------------------------------------------------------------------------
# 2. closed-form optimal eta vs numeric minimization
# ---------------------------------------------------------------------------

def test_criterion_2_eta_optimal_closed_vs_numeric():
    for d in (5.0, 10.0, 40.0, 100.0):
        closed = eta_optimal(d, REIDC, method="closed")
        numeric = eta_optimal(d, REIDC, method="numeric")
        assert abs(closed - numeric) < 1e-6


# ---------------------------------------------------------------------------
# 3. oracle equivalence at desk scale (flat 5% gate)
# ---------------------------------------------------------------------------

def test_criterion_3a_oracle_equivalence_at_most_probable_outcomes():
    t0 = time.perf_counter()
    rep = compare_report(offsets=((0, 0),), gate=0.05)
    assert rep["max_rel_err"] <= 0.05
    assert time.perf_counter() - t0 < 300.0


def test_criterion_3b_oracle_equivalence_at_one_std_offsets():
    """EXPECTED TO FAIL: second-order expansion error grows as phi*sqrt(N)
    off the mean; ~12% at N=1000, I0=50, 2 I0 N phi^2 = 4.  The adaptive
    gate max(5%, phi sqrt N) in compare_report documents the true accuracy.
    """
    t0 = time.perf_counter()
    rep = compare_report(gate=0.05)  # default offsets: mean and +/- 1 std per axis
    assert time.perf_counter() - t0 < 300.0
    assert rep["pass_adaptive_gate"]  # sanity: the scaling law itself holds
    assert rep["max_rel_err"] <= 0.05


# ---------------------------------------------------------------------------
# 4. full-Hilbert-space micro-oracle vs series-kernel posterior
# ---------------------------------------------------------------------------

def test_criterion_4_fock_micro_oracle():
    t0 = time.perf_counter()
    ens = EnsembleSpec(n_atoms=8, phi=0.05)
    probe = ProbeConfig(i0=4.0, x_t=math.pi / 4)
    outcomes = [
        most_probable_outcome(probe),
        MeasurementOutcome(10.0, 3.0),
        MeasurementOutcome(2.0, 14.0),
    ]
    for out in outcomes:
        rho = fock_posterior(ens, probe, out, cutoff=40)
        pw = posterior_weights(ens, probe, out, method="exact")
        shift = pw.log_w.max()
        w = np.exp(pw.log_w - shift)
        w /= w.sum()
        assert np.max(np.abs(np.diag(rho) - w)) < 1e-8
    assert time.perf_counter() - t0 < 10.0


# ---------------------------------------------------------------------------
# 5. light-moment closure
# ---------------------------------------------------------------------------

def test_criterion_5_light_moment_closure():
    cases = []
    for n in (100, 400, 1000, 2000):
        for i0 in (50.0, 100.0, 400.0):
            for phi_sqrt_n in (0.01, 0.03, 0.05):
                for x_t in (math.pi / 8, math.pi / 4, 3 * math.pi / 8):
                    if math.sin(2 * x_t) ** 2 >= 0.1:
                        cases.append((n, i0, phi_sqrt_n / math.sqrt(n), x_t))
    for n, i0, phi, x_t in cases:
        ens = EnsembleSpec(n_atoms=n, phi=phi)
        probe = ProbeConfig(i0=i0, x_t=x_t)
        ap = intensity_moments_approx(ens, probe)
        ex = intensity_moments_exact(ens, probe)
        assert abs(ap.var_total - ex.var_total) / ex.var_total <= 0.01
        assert abs(ex.mean_total - 4 * i0) <= 10.0 * i0 * n * phi**3 * math.sqrt(n) + 1e-9


# ---------------------------------------------------------------------------
# 6. Monte Carlo consistency with the second-order per-mode moments
# ---------------------------------------------------------------------------

N_MC = 100_000


def _mc_moments(seed=0):
    ens = EnsembleSpec(n_atoms=400, phi=7.07e-3)
    probe = ProbeConfig(i0=100.0, x_t=math.pi / 4)
    rng = np.random.default_rng(seed)
    ia = np.empty(N_MC)
    ib = np.empty(N_MC)
    for i in range(N_MC):
        s = sample_outcome(ens, probe, rng)
        ia[i], ib[i] = s.i_alpha, s.i_beta
    return ia, ib, intensity_moments_approx(ens, probe)


def _z_mean(arr, mu):
    return (arr.mean() - mu) / (arr.std(ddof=1) / math.sqrt(arr.size))


def _z_var(arr, var):
    v_hat = arr.var(ddof=1)
    m4 = float(np.mean((arr - arr.mean()) ** 4))
    se = math.sqrt((m4 - v_hat**2) / arr.size)
    return (v_hat - var) / se


def test_criterion_6a_monte_carlo_means():
    ia, ib, mom = _mc_moments(seed=0)
    assert abs(_z_mean(ia, mom.mean_alpha)) < 3.0
    assert abs(_z_mean(ib, mom.mean_beta)) < 3.0


def test_criterion_6b_monte_carlo_variances():
    """EXPECTED TO FAIL: the second-order variance formulas carry a ~1.6%
    truncation bias (exact mixture variance 984.3 vs formula 999.8 at this
    point), which 1e5 samples resolve at 3-4 standard errors.  The control
    test below shows the sampler agrees with the exact mixture moments.
    """
    ia, ib, mom = _mc_moments(seed=0)
    assert abs(_z_var(ia, mom.var_alpha)) < 3.0
    assert abs(_z_var(ib, mom.var_beta)) < 3.0


def test_criterion_6_sampler_matches_exact_mixture_moments():
    # control for 6b: the same samples agree with the exact mixture
    # variances, locating the discrepancy in the formulas, not the sampler
    ia, ib, _ = _mc_moments(seed=0)
    ens = EnsembleSpec(n_atoms=400, phi=7.07e-3)
    probe = ProbeConfig(i0=100.0, x_t=math.pi / 4)
    ex = intensity_moments_exact(ens, probe)
    assert abs(_z_var(ia, ex.var_alpha)) < 3.0
    assert abs(_z_var(ib, ex.var_beta)) < 3.0
    assert abs(_z_mean(ia, ex.mean_alpha)) < 3.0
    assert abs(_z_mean(ib, ex.mean_beta)) < 3.0


# ---------------------------------------------------------------------------
# 7. identity suite
# ---------------------------------------------------------------------------

def test_criterion_7_identity_suite():
    # binomial ladder recursion, exact to 1e-12 for N <= 60
    for n in range(1, 61):
        dw = css_log_weights(n)
        m = dw.m_values()[:-1]
        lhs = 0.5 * (dw.log_w[:-1] + dw.log_w[1:]) + 0.5 * np.log(
            (n / 2.0 - m) * (n / 2.0 + m + 1.0)
        )
        rhs = dw.log_w[:-1] + np.log(n / 2.0 - m)
        assert np.max(np.abs(lhs - rhs)) < 1e-12

    # Gaussian integrals vs adaptive quadrature, randomized coefficients
    rng = np.random.default_rng(2024)
    for _ in range(20):
        a = float(rng.uniform(0.05, 3.0))
        b = float(rng.uniform(-2.0, 2.0))
        c = float(rng.uniform(-1.0, 1.0))
        lim = 40.0 / math.sqrt(a)
        f = lambda x: math.exp(-a * x * x + b * x + c)
        q1 = quad(f, -lim, lim)[0]
        q2 = quad(lambda x: x * x * f(x), -lim, lim)[0]
        q3 = quad(lambda x: (25.0 - x) * f(x), -lim, lim)[0]
        assert abs(g1(a, b, c) - q1) <= 1e-10 * abs(q1)
        assert abs(g2(a, b, c) - q2) <= 1e-10 * abs(q2)
        assert abs(g3(a, b, c, 50.0) - q3) <= 1e-10 * abs(q3)

    # POVM completeness: integral over outcomes of the diagonal kernel is 1
    for gamma_sq in (0.5, 4.0, 25.0):
        def kernel(i_bar):
            log_s, _ = _log_series(i_bar * gamma_sq)
            return math.exp(-i_bar - gamma_sq + log_s)

        upper = gamma_sq + 60.0 + 20.0 * math.sqrt(gamma_sq)
        total = quad(kernel, 0.0, upper, limit=200)[0]
        assert abs(total - 1.0) < 1e-6


# ---------------------------------------------------------------------------
# 8. structural checks on the squeezing landscape
# ---------------------------------------------------------------------------

def test_criterion_8a_grid_minimum_at_mean_outcomes():
    n, i0 = 400, 100.0
    phi = math.sqrt(2.0 / (2 * i0 * n))
    ens = EnsembleSpec(n_atoms=n, phi=phi)
    probe = ProbeConfig(i0=i0, x_t=math.pi / 4)
    mean = most_probable_outcome(probe)
    mom = intensity_moments_approx(ens, probe)
    sa, sb = math.sqrt(mom.var_alpha), math.sqrt(mom.var_beta)
    xi_center = xi_closed_form(ens, probe, mean, jx_mode="shortcut").xi_sq
    for fa in np.linspace(-1, 1, 9):
        for fb in np.linspace(-1, 1, 9):
            out = MeasurementOutcome(
                max(mean.i_alpha + fa * sa, 0.0), max(mean.i_beta + fb * sb, 0.0)
            )
            xi = xi_closed_form(ens, probe, out, jx_mode="shortcut").xi_sq
            assert xi >= xi_center - 1e-12


def test_criterion_8b_most_probable_point_equals_canonical_law():
    for n, i0, prod, x_t in [
        (400, 100.0, 1.0, math.pi / 4),
        (1000, 50.0, 4.0, math.pi / 8),
        (100, 100.0, 0.5, 3 * math.pi / 8),
    ]:
        phi = math.sqrt(prod / (2 * i0 * n))
        ens = EnsembleSpec(n_atoms=n, phi=phi)
        probe = ProbeConfig(i0=i0, x_t=x_t)
        out = most_probable_outcome(probe)
        xi = xi_closed_form(ens, probe, out, jx_mode="shortcut").xi_sq
        # 2 I0 N phi^2 = eta d, so the canonical law reads 1/(1 + prod)
        assert abs(xi - xi_most_probable(0.5, 2.0 * prod)) < 1e-10


def test_criterion_8c_alkali_d75_minimum_near_0p4():
    """EXPECTED TO FAIL: the alkali-model curve at d=75 has its numeric
    minimum at xi'^2 = 0.3135 (eta = 0.061), outside the stated
    0.4 +/- 0.05 window.
    """
    eta = eta_optimal(75.0, ALKALI, method="numeric")
    assert xi_noisy(eta, 75.0, ALKALI) == pytest.approx(0.4, abs=0.05)
