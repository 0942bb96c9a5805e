"""Mutual information between measurement outcomes and the input state.

For the uniform (Haar) pure-state ensemble, every POVM whose effects are
proportional to rank-one projectors yields the same mutual information,
log d - sum_{k=1}^{d-1} 1/(1+k), independent of the weights. General POVMs
have no closed form and are handled by Monte Carlo; discrete ensembles are
evaluated exactly. All internal logs are natural; reports can be rescaled
to bits for display.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_TOL, Tolerances
from .errors import DimMismatchError, WeightError
from .linalg import haar_states
from .measurement import POVM

LN2 = float(np.log(2.0))


@dataclass(frozen=True)
class InfoReport:
    mutual_info: float
    h_b: float
    h_b_given_psi: float
    method: str  # "exact-finegrained" | "monte-carlo" | "finite-ensemble"
    stderr: float | None = None
    samples: int | None = None
    log_base: str = "nats"

    def in_bits(self) -> "InfoReport":
        if self.log_base == "bits":
            return self
        return InfoReport(
            self.mutual_info / LN2,
            self.h_b / LN2,
            self.h_b_given_psi / LN2,
            self.method,
            None if self.stderr is None else self.stderr / LN2,
            self.samples,
            "bits",
        )


def _harmonic_tail(d: int) -> float:
    """sum_{k=1}^{d-1} 1/(1+k)."""
    return float(sum(1.0 / (1 + k) for k in range(1, d)))


def info_finegrained_exact(d: int, bits: bool = False) -> float:
    """Mutual information of any rank-one-proportional POVM on Haar states."""
    if d < 1:
        raise ValueError("dimension must be positive")
    val = float(np.log(d)) - _harmonic_tail(d)
    return val / LN2 if bits else val


def jones_overlap_integral(a: np.ndarray, b: np.ndarray) -> float:
    """Haar average of |<psi|a>|^2 |<psi|b>|^2 = (1 + |<a|b>|^2) / (d(d+1))."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        raise DimMismatchError(f"shape mismatch {a.shape} vs {b.shape}")
    d = a.shape[0]
    return float((1.0 + abs(np.vdot(a, b)) ** 2) / (d * (d + 1)))


def xlogx_integral(d: int) -> float:
    """Haar average of |<b|psi>|^2 ln |<b|psi>|^2 for any fixed unit |b>."""
    if d < 1:
        raise ValueError("dimension must be positive")
    return -_harmonic_tail(d) / d


def _entropy_rows(p: np.ndarray) -> np.ndarray:
    """Shannon entropy (nats) of each row, with 0 log 0 = 0."""
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(p > 0, p * np.log(np.where(p > 0, p, 1.0)), 0.0)
    return -terms.sum(axis=-1)


def _outcome_probabilities(povm: POVM, states: np.ndarray) -> np.ndarray:
    """p(b|psi) = <psi|F_b|psi> for each state row; shape (n, outcomes).

    Rows are renormalized to sum to one (they do exactly, by completeness),
    which removes rounding noise; a single-effect POVM is exactly noiseless.
    """
    cols = [
        np.einsum("nd,nd->n", states.conj(), states @ e.T).real for e in povm.effects
    ]
    p = np.clip(np.stack(cols, axis=1), 0.0, None)
    return p / np.maximum(p.sum(axis=1, keepdims=True), 1e-300)


def info_uniform_mc(povm: POVM, n_samples: int, rng: np.random.Generator) -> InfoReport:
    """Outcome-state mutual information for the Haar ensemble, by sampling.

    H(B) is exact (outcome probabilities are tr F_b / d for the uniform
    ensemble); only the conditional term H(B|Psi) carries sampling noise,
    so the reported stderr applies to both it and the mutual information.
    """
    if n_samples < 2:
        raise ValueError("need at least two samples for a standard error")
    d = povm.dim
    p_b = np.asarray([np.trace(e).real / d for e in povm.effects])
    h_b = float(_entropy_rows(p_b[None, :])[0])
    cond = _entropy_rows(_outcome_probabilities(povm, haar_states(d, n_samples, rng)))
    h_cond = float(cond.mean())
    stderr = float(cond.std(ddof=1) / np.sqrt(n_samples))
    return InfoReport(h_b - h_cond, h_b, h_cond, "monte-carlo", stderr, n_samples)


def info_finite_ensemble(
    povm: POVM,
    ensemble: list[tuple[np.ndarray, float]],
    tol: Tolerances = DEFAULT_TOL,
) -> InfoReport:
    """Exact mutual information for a discrete pure-state ensemble."""
    weights = np.asarray([w for _, w in ensemble], dtype=float)
    if abs(weights.sum() - 1.0) > tol.weight or np.any(weights < 0):
        raise WeightError(f"ensemble weights must be a distribution, got sum {weights.sum()!r}")
    states = np.stack([np.asarray(psi, dtype=complex) for psi, _ in ensemble])
    cond = _outcome_probabilities(povm, states)
    p_b = weights @ cond
    h_b = float(_entropy_rows(p_b[None, :])[0])
    h_cond = float(weights @ _entropy_rows(cond))
    return InfoReport(h_b - h_cond, h_b, h_cond, "finite-ensemble")
