"""Measurement back-action: conditional reweighting of the Dicke distribution.

Intensity detection of the two probe pairs with outcomes (I_alpha, I_beta)
acts on the atomic state through a phase-averaged coherent POVM.  Its matrix
elements between Dicke indices m, m' factorize per mode as

    <M_g>_{m,m'} = e^{-I_g} e^{-(g_m^2 + g_m'^2)/2} S(I_g g_m g_m'),
    S(x) = sum_n x^n / (n!)^2,

where g_m is the real envelope of the mode.  S is evaluated by direct
log-space series summation (for x >= 0 this is the modified Bessel function
B_0(2 sqrt(x)); for x < 0 the alternating series is the ordinary Bessel
J_0(2 sqrt(-x)), summed with sign tracking and compensated accumulation).

The second-order path expands the log-kernel to quadratic order in m*phi,
giving the coefficients (V, W, Y, Z) and lambda = -2Y - Z.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .dicke import DickeWeights, EnsembleSpec, css_log_weights
from .probe import EPS_SING, ProbeConfig, mode_amplitudes

#: relative truncation threshold for the kernel series
SERIES_RTOL = 1e-18

#: hard cap on series terms
SERIES_MAX_TERMS = 10**6

#: default caps for the exact posterior path
ORACLE_N_CAP = 2000
ORACLE_I0_CAP = 1e4


class SingularPhase(ValueError):
    """x_t too close to a multiple of pi/2 for the second-order expansion."""


class SeriesOverflow(ArithmeticError):
    """Kernel series did not converge within the term cap."""


@dataclass(frozen=True)
class MeasurementOutcome:
    """Detector readings (photon counts) conditioning the posterior state."""

    i_alpha: float
    i_beta: float

    def __post_init__(self):
        for name, v in (("i_alpha", self.i_alpha), ("i_beta", self.i_beta)):
            if not np.isfinite(v) or v < 0:
                raise ValueError(f"{name} must be finite and >= 0, got {v}")


@dataclass(frozen=True)
class ExpansionCoeffs:
    """Quadratic log-kernel coefficients V, W, Y, Z and lambda = -2Y - Z."""

    v: float
    w: float
    y: float
    z: float

    @property
    def lam(self) -> float:
        return -2.0 * self.y - self.z


def most_probable_outcome(probe: ProbeConfig) -> MeasurementOutcome:
    """The per-mode intensity means (4 I0 cos^2 X_t, 4 I0 sin^2 X_t)."""
    return MeasurementOutcome(
        i_alpha=4.0 * probe.i0 * math.cos(probe.x_t) ** 2,
        i_beta=4.0 * probe.i0 * math.sin(probe.x_t) ** 2,
    )


def expansion_coeffs(
    probe: ProbeConfig,
    out: MeasurementOutcome,
    eps_sing: float = EPS_SING,
) -> ExpansionCoeffs:
    """Closed-form second-order expansion coefficients of the log-kernel.

    At the most probable outcomes these give W = 0 and lambda = 4 I0.
    Raises SingularPhase when |cos x_t| or |sin x_t| falls below eps_sing
    (both appear in denominators).
    """
    i0, x = probe.i0, probe.x_t
    c, s = math.cos(x), math.sin(x)
    if abs(c) < eps_sing:
        raise SingularPhase(
            f"|cos(x_t)| = {abs(c):.3g} < {eps_sing:g}; expansion divides by cos(x_t)"
        )
    if abs(s) < eps_sing:
        raise SingularPhase(
            f"|sin(x_t)| = {abs(s):.3g} < {eps_sing:g}; expansion divides by sin(x_t)"
        )
    ra = math.sqrt(out.i_alpha / i0) if i0 > 0 else 0.0
    rb = math.sqrt(out.i_beta / i0) if i0 > 0 else 0.0
    v = 4.0 * i0 * (ra * abs(c) + rb * abs(s) - 1.0)
    w = 2.0 * i0 * (
        ra * s * c / abs(c) + rb * c * s / abs(s) - 2.0 * math.sin(2.0 * x)
    )
    y = -0.5 * i0 * (ra * (1.0 + c * c) / abs(c) + rb * (1.0 + s * s) / abs(s))
    z = i0 * (ra * s * s / abs(c) + rb * c * c / abs(s))
    return ExpansionCoeffs(v=v, w=w, y=y, z=z)


def _log_series(x: float) -> tuple[float, float]:
    """(log|S|, sign) for S(x) = sum_n x^n / (n!)^2 by direct summation.

    Terms are generated in log space, truncated when they fall below
    SERIES_RTOL of the largest term, and accumulated (with signs for x < 0)
    using compensated summation after scaling out the peak term.
    """
    if x == 0.0:
        return 0.0, 1.0
    ax = abs(x)
    log_ax = math.log(ax)
    # term magnitudes peak near n = sqrt(|x|); pad generously for the tails
    n_peak = math.sqrt(ax)
    n_upper = int(n_peak + 12.0 * math.sqrt(n_peak + 1.0) + 60.0)
    if n_upper > SERIES_MAX_TERMS:
        raise SeriesOverflow(
            f"kernel series needs ~{n_upper} terms (> {SERIES_MAX_TERMS}); "
            "reduce I0 * I_bar"
        )
    n = np.arange(n_upper + 1)
    log_t = n * log_ax - 2.0 * gammaln(n + 1.0)
    t_max = log_t.max()
    if log_t[-1] > t_max + math.log(SERIES_RTOL):
        raise SeriesOverflow("kernel series not converged at the term cap")
    keep = log_t > t_max + math.log(SERIES_RTOL)
    terms = np.exp(log_t[keep] - t_max)
    if x < 0:
        terms = terms * np.where(n[keep] % 2 == 0, 1.0, -1.0)
    total = math.fsum(terms.tolist())
    if total == 0.0:
        return -math.inf, 0.0
    return t_max + math.log(abs(total)), math.copysign(1.0, total)


def povm_weight_exact(
    probe: ProbeConfig,
    out: MeasurementOutcome,
    ens: EnsembleSpec,
    m: float,
    m_prime: float,
) -> tuple[float, float]:
    """Signed log of <M_alpha>_{m,m'} <M_beta>_{m,m'} with the exact kernel.

    Returns (log|weight|, sign).  Symmetric under m <-> m'.
    """
    am, bm = mode_amplitudes(ens, probe, m, convention="full")
    ap, bp = mode_amplitudes(ens, probe, m_prime, convention="full")
    log_a, sign_a = _log_series(out.i_alpha * float(am) * float(ap))
    log_b, sign_b = _log_series(out.i_beta * float(bm) * float(bp))
    log_w = (
        -(out.i_alpha + out.i_beta)
        - 0.5 * (am * am + ap * ap + bm * bm + bp * bp)
        + log_a
        + log_b
    )
    return float(log_w), sign_a * sign_b


def _exact_kernel_band(
    ens: EnsembleSpec, probe: ProbeConfig, out: MeasurementOutcome
):
    """Diagonal and first-off-diagonal exact log-kernels over the m grid.

    Returns (diag_log, off_log, off_sign); diagonal kernels are positive.
    The m-independent factor e^{-(I_alpha + I_beta)} is dropped.
    """
    m = ens.m_values()
    a, b = mode_amplitudes(ens, probe, m, convention="full")
    ia, ib = a * a, b * b

    n_pts = ens.n_atoms + 1
    diag_log = np.empty(n_pts)
    for i in range(n_pts):
        la, _ = _log_series(out.i_alpha * ia[i])
        lb, _ = _log_series(out.i_beta * ib[i])
        diag_log[i] = -(ia[i] + ib[i]) + la + lb

    off_log = np.empty(n_pts - 1)
    off_sign = np.empty(n_pts - 1)
    for i in range(n_pts - 1):
        la, sa = _log_series(out.i_alpha * a[i] * a[i + 1])
        lb, sb = _log_series(out.i_beta * b[i] * b[i + 1])
        off_log[i] = (
            -0.5 * (ia[i] + ia[i + 1] + ib[i] + ib[i + 1]) + la + lb
        )
        off_sign[i] = sa * sb
    return diag_log, off_log, off_sign


def posterior_weights(
    ens: EnsembleSpec,
    probe: ProbeConfig,
    out: MeasurementOutcome,
    method: str = "exact",
) -> DickeWeights:
    """Conditional Dicke weights given a measurement outcome.

    method="exact" multiplies the binomial prior by the exact series kernel
    (N capped at ORACLE_N_CAP, I0 at ORACLE_I0_CAP); method="second_order"
    uses the quadratic expansion, whose diagonal log-factor is
    2 W phi m - lambda phi^2 m^2.  In both cases ``offdiag_logf`` holds the
    log-ratio F(m, m+1) = K(m, m+1) / K(m, m) needed for <Jx>, with signs
    carried separately.
    """
    prior = css_log_weights(ens.n_atoms)
    m = prior.m_values()

    if method == "exact":
        if ens.n_atoms > ORACLE_N_CAP:
            raise ValueError(
                f"n_atoms = {ens.n_atoms} exceeds exact-kernel cap {ORACLE_N_CAP}"
            )
        if probe.i0 > ORACLE_I0_CAP:
            raise ValueError(
                f"i0 = {probe.i0} exceeds exact-kernel cap {ORACLE_I0_CAP:g}"
            )
        diag_log, off_log, off_sign = _exact_kernel_band(ens, probe, out)
        log_w = prior.log_w + diag_log
        offdiag_logf = off_log - diag_log[:-1]
        return DickeWeights(
            n_atoms=ens.n_atoms,
            log_w=log_w,
            offdiag_logf=offdiag_logf,
            offdiag_sign=off_sign,
        )

    if method == "second_order":
        coef = expansion_coeffs(probe, out)
        phi = ens.phi
        lam = coef.lam
        log_w = prior.log_w + 2.0 * coef.w * phi * m - lam * phi * phi * m * m
        offdiag_logf = (
            coef.w * phi + coef.y * phi * phi - lam * phi * phi * m[:-1]
        )
        return DickeWeights(
            n_atoms=ens.n_atoms,
            log_w=log_w,
            offdiag_logf=offdiag_logf,
            offdiag_sign=np.ones(ens.n_atoms),
        )

    raise ValueError(f"unknown method {method!r}")
