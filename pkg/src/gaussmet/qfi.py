r"""Quantum Fisher information for squeezing estimation under an unknown phase.

The probe state passes through ``R(theta) S(eps) R(theta)`` on mode A. The
QFI about ``eps`` is read off the Bures metric at the working point
``eps = 0``:

.. math:: H^{(\theta)} = \lim_{\delta\to 0} 8\,(1 - \sqrt{F(\rho_{-\delta/2}, \rho_{+\delta/2})})/\delta^2,

and the figure of merit is its average over a uniformly distributed phase.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exceptions import InvalidInputError, NumericalError
from .gaussian import (
    GaussianState,
    coherent_from_photons,
    mean_photon_numbers,
    squeezed_from_photons,
    thermal,
    tmsv_from_photons,
)
from .measures import log_fidelity_batch
from .symplectic import encoding_map, rotation

DEFAULT_DELTA = 1e-3
DEFAULT_NODES = 128
CONVERGENCE_TOL = 1e-3
NEGATIVE_TOL = 1e-8


def _encoding_maps(epsilon: float, thetas: np.ndarray, modes: int) -> np.ndarray:
    """Stack of :func:`encoding_map` over ``thetas``."""
    c, s = np.cos(thetas), np.sin(thetas)
    rot = np.stack([np.stack([c, s], -1), np.stack([-s, c], -1)], -2)
    local = rot * np.array([np.exp(epsilon), np.exp(-epsilon)]) @ rot
    maps = np.broadcast_to(np.eye(2 * modes), (thetas.size, 2 * modes, 2 * modes)).copy()
    maps[:, :2, :2] = local
    return maps


def _encoded(state: GaussianState, epsilon: float, thetas: np.ndarray):
    maps = _encoding_maps(epsilon, thetas, state.modes)
    cms = maps @ state.cm @ np.swapaxes(maps, -1, -2)
    cms = (cms + np.swapaxes(cms, -1, -2)) / 2
    return cms, maps @ state.disp


def _bures_quotient(state: GaussianState, thetas: np.ndarray, delta: float) -> np.ndarray:
    """``8 (1 - sqrt F) / delta^2`` for a symmetric pair of probes ``delta`` apart."""
    cm1, d1 = _encoded(state, -delta / 2, thetas)
    cm2, d2 = _encoded(state, delta / 2, thetas)
    log_f = log_fidelity_batch(cm1, d1, cm2, d2)
    return -8 * np.expm1(0.5 * log_f) / delta**2


def qfi_batch(state: GaussianState, thetas, delta: float = DEFAULT_DELTA) -> np.ndarray:
    """Vectorised :func:`qfi_at_theta` over an array of phases."""
    if not 0 < delta <= 1e-2:
        raise InvalidInputError(f"delta must lie in (0, 1e-2], got {delta}")
    thetas = np.atleast_1d(np.asarray(thetas, dtype=float))
    try:
        coarse = _bures_quotient(state, thetas, delta)
        fine = _bures_quotient(state, thetas, delta / 2)
    except NumericalError as exc:
        raise NumericalError(f"QFI evaluation failed: {exc}", cm=state.cm) from exc
    # the symmetric quotient is even in delta, so the leading error is O(delta^2)
    return (4 * fine - coarse) / 3


def qfi_at_theta(state: GaussianState, theta: float, delta: float = DEFAULT_DELTA) -> float:
    """QFI about the squeezing parameter at phase ``theta`` and ``eps = 0``.

    Args:
        state (GaussianState): probe state
        theta (float): phase picked up before and after the squeezer
        delta (float): finite-difference spacing, in ``(0, 1e-2]``

    Returns:
        float: Richardson-extrapolated QFI
    """
    return float(qfi_batch(state, [theta], delta)[0])


@dataclass(frozen=True)
class QfiReport:
    """Phase-resolved QFI samples and their average."""

    thetas: np.ndarray
    values: np.ndarray
    avg_qfi: float
    quadrature_nodes: int
    convergence_delta: float
    converged: bool = True
    negative: bool = False
    n_A: float = field(default=float("nan"))

    @property
    def theta_samples(self) -> list[tuple[float, float]]:
        return list(zip(self.thetas.tolist(), self.values.tolist()))

    @property
    def flags(self) -> list[str]:
        out = []
        if not self.converged:
            out.append("nonconverged")
        if self.negative:
            out.append("negative_qfi")
        return out


def avg_qfi(
    state: GaussianState,
    nodes: int = DEFAULT_NODES,
    delta: float = DEFAULT_DELTA,
    max_nodes: int | None = None,
    tol: float = CONVERGENCE_TOL,
) -> QfiReport:
    """Average the QFI over the phase with the periodic trapezoid rule.

    Convergence is judged by comparing the ``nodes`` rule with the
    ``nodes/2`` rule on every other node. If the change exceeds ``tol`` the
    grid doubles until ``max_nodes``; a still unconverged result is flagged
    in the report rather than raised.
    """
    if nodes < 16 or nodes & (nodes - 1):
        raise InvalidInputError(f"nodes must be a power of two >= 16, got {nodes}")
    max_nodes = nodes if max_nodes is None else max(max_nodes, nodes)
    while True:
        thetas = 2 * np.pi * np.arange(nodes) / nodes
        values = qfi_batch(state, thetas, delta)
        avg = float(np.mean(values))
        conv = abs(avg - float(np.mean(values[::2])))
        if conv <= tol or nodes >= max_nodes:
            break
        nodes *= 2
    return QfiReport(
        thetas=thetas,
        values=values,
        avg_qfi=avg,
        quadrature_nodes=nodes,
        convergence_delta=conv,
        converged=conv <= tol,
        negative=bool(np.min(values) < -NEGATIVE_TOL),
        n_A=float(mean_photon_numbers(state)[0]),
    )


def quantum_crb(avg_qfi: float, m_copies: int = 1) -> float:
    """Quantum Cramer-Rao bound ``1/sqrt(M H)`` on the estimation error."""
    if avg_qfi <= 0:
        raise InvalidInputError(f"QFI must be positive, got {avg_qfi}")
    if m_copies < 1:
        raise InvalidInputError(f"need at least one copy, got {m_copies}")
    return 1 / np.sqrt(m_copies * avg_qfi)


# ~~~~~~~~~~~~~~~~~~~~~~~~~
#  Analytic bound curves
# ~~~~~~~~~~~~~~~~~~~~~~~~~


def avg_qfi_vs_logneg(n_A, E_N):
    """Average QFI of pure two-mode states as a function of ``n_A`` and log-negativity."""
    n_A, E_N = np.asarray(n_A, dtype=float), np.asarray(E_N, dtype=float)
    nu = np.exp(-E_N)
    out = 2 + 8 * n_A * (1 + n_A) / (1 + (2 + 4 * n_A - nu) * nu)
    return out if out.ndim else float(out)


def _tmsv_log_negativity(n_A):
    return 2 * np.arcsinh(np.sqrt(n_A))


BOUND_FAMILIES = {
    "pure-squeezed-upper": lambda n: 4 * n**2 + 4 * n + 2,
    "thermal-lower": lambda n: 4 * (2 * n + 1) ** 2 / (1 + (2 * n + 1) ** 2),
    "coherent": lambda n: 4 * n + 2,
    "separable-upper": lambda n: 3 - 1 / (1 + 2 * n) + 2 * n,
    "discord-upper": lambda n: 4 * n + 2,
    "entangled-logneg": None,
}


def bound_curve(family: str, n_A, E_N=None):
    """Closed-form average-QFI curve of a state family versus mode-A photons.

    ``entangled-logneg`` takes the log-negativity ``E_N``; when omitted the
    two-mode squeezed vacuum value ``2 asinh(sqrt(n_A))`` is used, which
    reproduces the pure-squeezed upper curve.
    """
    if family not in BOUND_FAMILIES:
        raise InvalidInputError(f"unknown bound family {family!r}; choose from {sorted(BOUND_FAMILIES)}")
    n = np.asarray(n_A, dtype=float)
    if np.any(n < 0):
        raise InvalidInputError("photon number must be non-negative")
    if family == "entangled-logneg":
        out = np.asarray(avg_qfi_vs_logneg(n, _tmsv_log_negativity(n) if E_N is None else E_N))
    else:
        out = BOUND_FAMILIES[family](n)
    return out if np.ndim(out) else float(out)


# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
#  Homodyne detection baseline
# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~


def homodyne_classical_fi(state: GaussianState, theta: float, quadrature_angle: float) -> float:
    """Classical Fisher information of homodyning mode A at ``quadrature_angle``.

    The outcome is Gaussian with mean ``u.d`` and variance ``u.cm.u`` where
    ``u = (cos, sin)`` on mode A; its Fisher information about ``eps`` is
    ``m'^2/v + v'^2/(2 v^2)`` with derivatives taken analytically at 0.
    """
    u = np.zeros(state.dim)
    u[:2] = np.cos(quadrature_angle), np.sin(quadrature_angle)
    T0 = encoding_map(0.0, theta, state.modes)
    dT = np.zeros((state.dim, state.dim))
    dT[:2, :2] = rotation(theta) @ np.diag([1.0, -1.0]) @ rotation(theta)
    mean_d = u @ dT @ state.disp
    var = u @ T0 @ state.cm @ T0.T @ u
    var_d = 2 * u @ dT @ state.cm @ T0.T @ u
    return float(mean_d**2 / var + var_d**2 / (2 * var**2))


# ~~~~~~~~~~~~~~~~~~~~~
#  Scaling with energy
# ~~~~~~~~~~~~~~~~~~~~~

SCALING_FAMILIES = {
    "squeezed": squeezed_from_photons,
    "coherent": coherent_from_photons,
    "thermal": thermal,
    "tmsv": tmsv_from_photons,
}


@dataclass(frozen=True)
class ScalingFit:
    """Power-law fit of the average QFI against the mode-A energy.

    ``exponent`` regresses ``log H`` on ``log(n + 1/2)``, the energy in
    quanta including the vacuum half-quantum; ``naive_exponent`` uses
    ``log n`` and carries the pre-asymptotic curvature of small ``n``.
    """

    family: str
    n_grid: np.ndarray
    avg_qfi: np.ndarray
    exponent: float
    naive_exponent: float


def heisenberg_scaling_check(family: str, n_grid, nodes: int = 32, delta: float = DEFAULT_DELTA) -> ScalingFit:
    if family not in SCALING_FAMILIES:
        raise InvalidInputError(f"unknown family {family!r}; choose from {sorted(SCALING_FAMILIES)}")
    n_grid = np.asarray(n_grid, dtype=float)
    if n_grid.min() <= 0 or n_grid.max() / n_grid.min() < 10:
        raise InvalidInputError("photon-number grid must be positive and span at least a decade")
    make = SCALING_FAMILIES[family]
    values = np.array([avg_qfi(make(n), nodes=nodes, delta=delta).avg_qfi for n in n_grid])
    exponent = np.polyfit(np.log(n_grid + 0.5), np.log(values), 1)[0]
    naive = np.polyfit(np.log(n_grid), np.log(values), 1)[0]
    return ScalingFit(family, n_grid, values, float(exponent), float(naive))


__all__ = [
    "BOUND_FAMILIES",
    "QfiReport",
    "ScalingFit",
    "avg_qfi",
    "avg_qfi_vs_logneg",
    "bound_curve",
    "heisenberg_scaling_check",
    "homodyne_classical_fi",
    "qfi_at_theta",
    "qfi_batch",
    "quantum_crb",
]
