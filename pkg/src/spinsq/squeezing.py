"""Closed-form squeezing parameter, limits, and photon-scattering noise.

The Gaussian-integral solution of the second-order posterior gives

    <Jz^2> = (N/4) [ 1/(1+s) + N phi^2 W^2 / (1+s)^2 ],   s = N phi^2 lambda / 2,
    <Jx>   = e^{Y phi^2 + W phi} G3(a, b', 0) / G1(a, b, 0),

with a = 2/N + lambda phi^2, b = 2 W phi, b' = b - lambda phi^2, and the
standard Gaussian integrals G1..G3 below.  For N >> 1 and I0 ~ O(N) the
<Jx> factor collapses to the shortcut N/2, in which case the most probable
outcome (W = 0, lambda = 4 I0) yields the canonical

    xi^2 = 1 / (1 + 2 I0 N phi^2) = 1 / (1 + eta d).

Scattering noise enters through two models: for rare-earth ensembles
xi'^2 = xi^2 / (1-eta)^2, minimized over eta at (d-2)/(3d); for alkali
vapors xi'^2 = xi^2 + eta/(1-eta) + eta/(1-eta)^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .backaction import ExpansionCoeffs, MeasurementOutcome, expansion_coeffs
from .dicke import EnsembleSpec, SqueezingResult
from .probe import ProbeConfig


@dataclass(frozen=True)
class NoiseModel:
    """Photon-scattering noise model selector."""

    kind: str

    def __post_init__(self):
        if self.kind not in ("reidc", "alkali"):
            raise ValueError(f"kind must be 'reidc' or 'alkali', got {self.kind!r}")


REIDC = NoiseModel("reidc")
ALKALI = NoiseModel("alkali")


def _as_model(model) -> NoiseModel:
    if isinstance(model, NoiseModel):
        return model
    return NoiseModel(str(model))


# ---------------------------------------------------------------------------
# Gaussian integrals
# ---------------------------------------------------------------------------

def g1(a: float, b: float, c: float) -> float:
    """Integral of e^{-a x^2 + b x + c} over the real line (a > 0)."""
    if a <= 0:
        raise ValueError(f"g1 requires a > 0, got a = {a}")
    return math.sqrt(math.pi / a) * math.exp(b * b / (4.0 * a) + c)


def g2(a: float, b: float, c: float) -> float:
    """Integral of x^2 e^{-a x^2 + b x + c} over the real line (a > 0)."""
    return (2.0 * a + b * b) / (4.0 * a * a) * g1(a, b, c)


def g3(a: float, b: float, c: float, n_atoms: float) -> float:
    """Integral of (N/2 - x) e^{-a x^2 + b x + c} over the real line (a > 0)."""
    return (-b + a * n_atoms) / (2.0 * a) * g1(a, b, c)


# ---------------------------------------------------------------------------
# Closed-form squeezing parameter
# ---------------------------------------------------------------------------

def closed_form_moments(
    ens: EnsembleSpec, coef: ExpansionCoeffs, jx_mode: str = "exact"
) -> SqueezingResult:
    """<Jz^2>, <Jx>, xi^2 from expansion coefficients via Gaussian integrals."""
    n, phi = ens.n_atoms, ens.phi
    lam, w, y = coef.lam, coef.w, coef.y
    s = n * phi * phi * lam / 2.0
    jz2 = (n / 4.0) * (1.0 / (1.0 + s) + n * phi * phi * w * w / (1.0 + s) ** 2)

    if jx_mode == "shortcut":
        jx = n / 2.0
    elif jx_mode == "exact":
        a = 2.0 / n + lam * phi * phi
        b = 2.0 * w * phi
        bp = b - lam * phi * phi
        jx = (
            math.exp(y * phi * phi + w * phi)
            * ((-bp + a * n) / (2.0 * a))
            * math.exp((bp * bp - b * b) / (4.0 * a))
        )
    else:
        raise ValueError(f"unknown jx_mode {jx_mode!r}")

    if jx > 0:
        return SqueezingResult(jz2=jz2, jx=jx, xi_sq=n * jz2 / jx**2)
    return SqueezingResult(jz2=jz2, jx=jx, xi_sq=float("inf"), jx_zero=True)


def xi_closed_form(
    ens: EnsembleSpec,
    probe: ProbeConfig,
    out: MeasurementOutcome,
    jx_mode: str = "exact",
) -> SqueezingResult:
    """Closed-form conditional squeezing for a given measurement outcome.

    jx_mode="exact" evaluates the full Gaussian-integral <Jx> including its
    exponential correction factors; jx_mode="shortcut" uses the N >> 1
    approximation <Jx> = N/2.
    """
    coef = expansion_coeffs(probe, out)
    return closed_form_moments(ens, coef, jx_mode=jx_mode)


def xi_most_probable(eta: float, d: float) -> float:
    """xi^2 = 1/(1 + eta d) at the most probable outcomes."""
    if not 0.0 <= eta < 1.0:
        raise ValueError(f"eta must be in [0, 1), got {eta}")
    if d < 0:
        raise ValueError(f"d must be >= 0, got {d}")
    return 1.0 / (1.0 + eta * d)


def xi_noisy(eta: float, d: float, model=REIDC) -> float:
    """Squeezing degraded by photon scattering, per the chosen model."""
    if not 0.0 <= eta < 1.0:
        raise ValueError(f"eta must be in [0, 1), got {eta}")
    model = _as_model(model)
    base = xi_most_probable(eta, d)
    if model.kind == "reidc":
        return base / (1.0 - eta) ** 2
    return base + eta / (1.0 - eta) + eta / (1.0 - eta) ** 2


def _golden_min(f, lo: float, hi: float, tol: float = 1e-12) -> float:
    """Golden-section minimizer of a unimodal function on [lo, hi]."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d_ = a + invphi * (b - a)
    fc, fd = f(c), f(d_)
    while b - a > tol:
        if fc < fd:
            b, d_, fd = d_, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d_, fd
            d_ = a + invphi * (b - a)
            fd = f(d_)
    return 0.5 * (a + b)


def eta_optimal(
    d: float,
    model=REIDC,
    method: str = "auto",
    with_flag: bool = False,
):
    """Scattering probability minimizing xi_noisy at fixed optical depth.

    For the reidc model with d > 2 the closed form (d-2)/(3d) is available
    ("closed"); "numeric" runs a golden-section search; "auto" picks the
    closed form when valid.  With ``with_flag`` the return value is
    (eta, boundary) where boundary marks the absence of an interior minimum.
    """
    if d <= 0:
        raise ValueError(f"d must be > 0, got {d}")
    model = _as_model(model)
    lo, hi = 1e-9, 1.0 - 1e-9

    if method not in ("auto", "closed", "numeric"):
        raise ValueError(f"unknown method {method!r}")
    if method in ("auto", "closed") and model.kind == "reidc" and d > 2:
        eta = (d - 2.0) / (3.0 * d)
        return (eta, False) if with_flag else eta
    if method == "closed":
        raise ValueError("closed-form eta_optimal requires the reidc model and d > 2")

    eta = _golden_min(lambda e: xi_noisy(e, d, model), lo, hi)
    boundary = eta - lo < 1e-6 or hi - eta < 1e-6
    if boundary:
        eta = lo if eta - lo < 1e-6 else hi
    return (eta, boundary) if with_flag else eta


def phi_from_eta_d(eta: float, d: float, n_atoms: float, i0: float) -> float:
    """Phase shift per atom: phi = sqrt(eta d / (2 N I0))."""
    if eta <= 0 or d <= 0 or n_atoms <= 0 or i0 <= 0:
        raise ValueError("all arguments must be > 0")
    return math.sqrt(eta * d / (2.0 * n_atoms * i0))


def xi_db(xi_sq: float) -> float:
    """Squeezing in decibels: -10 log10(xi^2)."""
    if xi_sq <= 0:
        raise ValueError(f"xi_sq must be > 0, got {xi_sq}")
    return -10.0 * math.log10(xi_sq)
