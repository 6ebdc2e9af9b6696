"""Coherent-spin-state / Dicke-basis bookkeeping.

A symmetric ensemble of N spin-1/2 atoms polarized along x is described in
the Dicke basis |m>, m = -N/2 .. N/2, by binomial weights

    w_m = C(N, N/2 + m) / 2^N.

Everything here works in log space so that posterior reweighting by factors
of order exp(I0) cannot overflow.  Half-integer m (odd N) is supported by
indexing with the integer 2m.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.special import gammaln

# Sanity cap on N*phi: beyond this the second-order machinery downstream is
# meaningless and almost certainly indicates a unit error in the input.
PHI_N_CAP = 1e3


@dataclass(frozen=True)
class EnsembleSpec:
    """Atom count and dispersive phase shift per atom."""

    n_atoms: int
    phi: float = 0.0

    def __post_init__(self):
        if self.n_atoms < 1 or int(self.n_atoms) != self.n_atoms:
            raise ValueError(f"n_atoms must be a positive integer, got {self.n_atoms}")
        if not np.isfinite(self.phi) or self.phi < 0:
            raise ValueError(f"phi must be finite and >= 0, got {self.phi}")
        if self.phi * self.n_atoms > PHI_N_CAP:
            raise ValueError(
                f"phi * n_atoms = {self.phi * self.n_atoms:.3g} exceeds the sanity "
                f"cap {PHI_N_CAP:.0e}; check units"
            )

    def two_m_values(self) -> np.ndarray:
        """Integer array of 2m over the full Dicke ladder, ascending."""
        n = self.n_atoms
        return np.arange(-n, n + 1, 2)

    def m_values(self) -> np.ndarray:
        """Array of m (half-integer when n_atoms is odd), ascending."""
        return self.two_m_values() / 2.0


@dataclass
class DickeWeights:
    """Log-domain diagonal weights, plus optional off-diagonal factors.

    ``log_w[i]`` is the unnormalized log-weight of Dicke index
    m = -N/2 + i.  ``offdiag_logf``/``offdiag_sign``, when present, hold the
    length-N band of factors F(m, m+1) multiplying the coherences needed for
    <Jx>; for a bare CSS they are absent and F == 1 implicitly.
    """

    n_atoms: int
    log_w: np.ndarray
    offdiag_logf: Optional[np.ndarray] = None
    offdiag_sign: Optional[np.ndarray] = None

    def __post_init__(self):
        self.log_w = np.asarray(self.log_w, dtype=float)
        if self.log_w.shape != (self.n_atoms + 1,):
            raise ValueError(
                f"log_w must have length n_atoms + 1 = {self.n_atoms + 1}, "
                f"got shape {self.log_w.shape}"
            )
        if self.offdiag_logf is not None:
            self.offdiag_logf = np.asarray(self.offdiag_logf, dtype=float)
            if self.offdiag_logf.shape != (self.n_atoms,):
                raise ValueError("offdiag_logf must have length n_atoms")
            if self.offdiag_sign is None:
                self.offdiag_sign = np.ones(self.n_atoms)
            else:
                self.offdiag_sign = np.asarray(self.offdiag_sign, dtype=float)
                if self.offdiag_sign.shape != (self.n_atoms,):
                    raise ValueError("offdiag_sign must have length n_atoms")

    def m_values(self) -> np.ndarray:
        return np.arange(-self.n_atoms, self.n_atoms + 1, 2) / 2.0

    def normalized(self) -> np.ndarray:
        """Probability weights, exp-normalized with a max shift."""
        shift = self.log_w.max()
        w = np.exp(self.log_w - shift)
        return w / w.sum()


@dataclass(frozen=True)
class SqueezingResult:
    """Collective moments and the squeezing parameter xi^2 = N <Jz^2> / <Jx>^2."""

    jz2: float
    jx: float
    xi_sq: float
    jx_zero: bool = False


def css_log_weights(n_atoms: int) -> DickeWeights:
    """Exact log-binomial CSS weights via log-gamma.

    w_m = C(N, N/2 + m) / 2^N, stored as log weights; exactly symmetric in m.
    """
    if n_atoms < 1 or int(n_atoms) != n_atoms:
        raise ValueError(f"n_atoms must be a positive integer, got {n_atoms}")
    n = int(n_atoms)
    k = np.arange(n + 1)
    log_w = gammaln(n + 1) - gammaln(k + 1) - gammaln(n - k + 1) - n * np.log(2.0)
    # enforce exact m -> -m symmetry against round-off
    log_w = 0.5 * (log_w + log_w[::-1])
    return DickeWeights(n_atoms=n, log_w=log_w)


def collective_moments(weights: DickeWeights) -> SqueezingResult:
    """<Jz^2>, <Jx> and xi^2 from (possibly posterior-reweighted) weights.

    <Jz^2> = sum_m w_m m^2 / sum_m w_m.
    <Jx>   = sum_m w_m (N/2 - m) F(m, m+1) / sum_m w_m, with F == 1 when no
    off-diagonal factors are stored (the binomial ladder identity
    c_m c_{m+1} sqrt((N/2-m)(N/2+m+1)) = c_m^2 (N/2-m) folds the raising and
    lowering contributions into this single diagonal-weighted sum).

    A vanishing <Jx> yields xi_sq = +inf with the ``jx_zero`` flag set rather
    than an exception.
    """
    n = weights.n_atoms
    m = weights.m_values()
    shift = weights.log_w.max()
    w = np.exp(weights.log_w - shift)
    norm = w.sum()

    jz2 = float(np.dot(w, m * m) / norm)

    if weights.offdiag_logf is None:
        jx = float(np.dot(w, n / 2.0 - m) / norm)
    else:
        contrib = (
            np.exp(weights.log_w[:-1] + weights.offdiag_logf - shift)
            * weights.offdiag_sign
            * (n / 2.0 - m[:-1])
        )
        jx = float(contrib.sum() / norm)

    if jx > 0:
        xi_sq = n * jz2 / jx**2
        return SqueezingResult(jz2=jz2, jx=jx, xi_sq=xi_sq)
    return SqueezingResult(jz2=jz2, jx=jx, xi_sq=float("inf"), jx_zero=True)
