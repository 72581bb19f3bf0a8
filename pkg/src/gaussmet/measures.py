r"""Information-theoretic quantities on Gaussian states and discrete distributions.

Units: entropy and coherence are in bits, logarithmic negativity in nats.
Fidelity follows the squared (Uhlmann) convention
:math:`F = (\mathrm{Tr}\sqrt{\sqrt{\rho_1}\rho_2\sqrt{\rho_1}})^2`, so that the
Bures distance reads :math:`d_B^2 = 2(1 - \sqrt{F})`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import InvalidInputError, NumericalError
from .gaussian import GaussianState, mean_photon_numbers, symplectic_eigenvalues, symplectic_form
from .symplectic import partial_transpose_B

# states whose symplectic eigenvalues are all within this of 1 are treated as pure
PURE_TOL = 1e-6
_ENTROPY_EPS = 1e-12


def _g(x):
    """``x log2 x`` with the ``x -> 0`` limit."""
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    mask = x > _ENTROPY_EPS
    out[mask] = x[mask] * np.log2(x[mask])
    return out


def entropy(state: GaussianState) -> float:
    """Von Neumann entropy in bits, from the symplectic eigenvalues."""
    nu = symplectic_eigenvalues(state.cm)
    return float(np.sum(_g((nu + 1) / 2) - _g((nu - 1) / 2)))


def coherence(state: GaussianState) -> float:
    """Relative-entropy coherence in the Fock basis, in bits.

    Equals the entropy of the thermal state with the same photon numbers
    minus the entropy of ``state``; zero exactly on thermal states.
    Round-off below 1e-12 bits is reported as zero.
    """
    n = np.clip(mean_photon_numbers(state), 0.0, None)
    value = float(np.sum(_g(n + 1) - _g(n)) - entropy(state))
    return value if value > _ENTROPY_EPS else 0.0


@dataclass(frozen=True)
class EntanglementReport:
    """Smallest partial-transpose symplectic eigenvalue and the log-negativity (nats)."""

    nu_tilde: float
    log_negativity: float


def log_negativity(state: GaussianState) -> EntanglementReport:
    r"""Logarithmic negativity from the local symplectic invariants.

    With ``A, B, C, D`` the determinants of the two local blocks, of the
    correlation block and of the full matrix,
    :math:`2\tilde\nu^2 = \tilde\Delta - \sqrt{\tilde\Delta^2 - 4D}`
    where :math:`\tilde\Delta = A + B - 2C`.
    """
    if state.modes != 2:
        raise InvalidInputError("log-negativity needs a two-mode state")
    cm = state.cm
    A = np.linalg.det(cm[:2, :2])
    B = np.linalg.det(cm[2:, 2:])
    C = np.linalg.det(cm[:2, 2:])
    D = np.linalg.det(cm)
    h = A + B - 2 * C
    # 2 nu^2 = h - sqrt(h^2 - 4D), rewritten to avoid cancellation
    nu2 = 2 * D / (h + np.sqrt(max(h * h - 4 * D, 0.0)))
    nu = float(np.sqrt(nu2))
    return EntanglementReport(nu, max(0.0, float(-np.log(nu))))


def log_negativity_direct(state: GaussianState) -> EntanglementReport:
    """Same as :func:`log_negativity` but through an explicit eigen-decomposition."""
    nu = float(symplectic_eigenvalues(partial_transpose_B(state.cm))[0])
    return EntanglementReport(nu, max(0.0, float(-np.log(nu))))


# ~~~~~~~~~~~~~~~~~~~
#  Gaussian fidelity
# ~~~~~~~~~~~~~~~~~~~


def _batch_symplectic_eigenvalues(cm: np.ndarray) -> np.ndarray:
    n = cm.shape[-1] // 2
    if n == 1:
        return np.sqrt(np.linalg.det(cm))[..., None]
    w, v = np.linalg.eigh(cm)
    if np.any(w[..., 0] <= 0):
        raise NumericalError("covariance matrix is not positive definite")
    root = (v * np.sqrt(w)[..., None, :]) @ np.swapaxes(v, -1, -2)
    spec = np.linalg.eigvalsh(1j * root @ symplectic_form(n) @ root)
    return np.abs(spec)[..., n:]


def log_fidelity_batch(cm1, disp1, cm2, disp2) -> np.ndarray:
    """Natural log of the fidelity for stacks of states (leading axes broadcast).

    Near-pure pairs go through the normalised overlap
    ``Tr(rho1 rho2) / sqrt(Tr rho1^2 Tr rho2^2)``, which is exact for pure
    states and free of the square-root cancellation that the mixed-state
    formulas suffer from close to purity.
    """
    cm1, cm2 = np.asarray(cm1, dtype=float), np.asarray(cm2, dtype=float)
    disp1, disp2 = np.asarray(disp1, dtype=float), np.asarray(disp2, dtype=float)
    n = cm1.shape[-1] // 2
    total = cm1 + cm2
    sign, logdet_total = np.linalg.slogdet(total)
    if np.any(sign <= 0):
        raise NumericalError("sum of covariance matrices is singular", cm=total)
    dd = disp1 - disp2
    quad = np.einsum("...i,...i->...", dd, np.linalg.solve(total, dd[..., None])[..., 0])

    nu1 = _batch_symplectic_eigenvalues(cm1)
    nu2 = _batch_symplectic_eigenvalues(cm2)
    pure1 = np.max(nu1, axis=-1) - 1 < PURE_TOL
    pure2 = np.max(nu2, axis=-1) - 1 < PURE_TOL

    log_overlap = n * np.log(2.0) - 0.5 * logdet_total
    norm = 0.5 * (np.where(pure1, np.sum(np.log(nu1), -1), 0.0) + np.where(pure2, np.sum(np.log(nu2), -1), 0.0))
    log_f_pure = log_overlap + norm

    excess1 = np.prod(np.sqrt(np.clip(nu1**2 - 1, 0, None)), axis=-1)
    excess2 = np.prod(np.sqrt(np.clip(nu2**2 - 1, 0, None)), axis=-1)
    det_total = np.exp(logdet_total)
    with np.errstate(invalid="ignore", divide="ignore"):
        if n == 1:
            root_lam = excess1 * excess2
            f_mixed = 2 * (np.sqrt(det_total + root_lam**2) + root_lam) / det_total
        else:
            omega = symplectic_form(2)
            gamma = np.linalg.det(omega @ cm1 @ omega @ cm2 - np.eye(4)) / 16
            x = np.sqrt(np.clip(gamma, 0, None)) + excess1 * excess2 / 4
            delta = det_total / 16
            f_mixed = (x + np.sqrt(np.clip(x * x - delta, 0, None))) / delta
        log_f_mixed = np.log(f_mixed)

    log_f = np.where(pure1 | pure2, log_f_pure, log_f_mixed) - 0.5 * quad
    if not np.all(np.isfinite(log_f)):
        raise NumericalError("fidelity evaluation produced a non-finite value", cm=cm1)
    return np.minimum(log_f, 0.0)


def _check_pair(s1: GaussianState, s2: GaussianState):
    if s1.modes != s2.modes:
        raise InvalidInputError(f"mode mismatch: {s1.modes} vs {s2.modes}")


def log_fidelity(s1: GaussianState, s2: GaussianState) -> float:
    _check_pair(s1, s2)
    return float(log_fidelity_batch(s1.cm, s1.disp, s2.cm, s2.disp))


def gaussian_fidelity(s1: GaussianState, s2: GaussianState) -> float:
    """Uhlmann fidelity between two Gaussian states of one or two modes."""
    return float(np.exp(log_fidelity(s1, s2)))


def bures_distance_sq(s1: GaussianState, s2: GaussianState) -> float:
    """Squared Bures distance ``2(1 - sqrt(F))``, evaluated via ``expm1``."""
    return float(-2 * np.expm1(0.5 * log_fidelity(s1, s2)))


# ~~~~~~~~~~~~~~~~~~~~~~~~~
#  Classical distributions
# ~~~~~~~~~~~~~~~~~~~~~~~~~


def _as_probs(p) -> np.ndarray:
    p = np.asarray(getattr(p, "probs", p), dtype=float)
    if p.ndim != 1:
        raise InvalidInputError("a distribution must be a 1-D vector")
    if np.any(p < 0):
        raise InvalidInputError("negative probability")
    if abs(p.sum() - 1) > 1e-12:
        raise InvalidInputError(f"distribution sums to {p.sum():.15g}, not 1")
    return p


def classical_overlap(p, q) -> float:
    """Bhattacharyya overlap ``sum sqrt(p q)``."""
    p, q = _as_probs(p), _as_probs(q)
    if p.shape != q.shape:
        raise InvalidInputError("distributions live on different outcome spaces")
    return float(np.sum(np.sqrt(p * q)))


def hellinger_distance_sq(p, q) -> float:
    """Squared Hellinger distance ``sum (sqrt p - sqrt q)^2``."""
    p, q = _as_probs(p), _as_probs(q)
    if p.shape != q.shape:
        raise InvalidInputError("distributions live on different outcome spaces")
    return float(np.sum((np.sqrt(p) - np.sqrt(q)) ** 2))
