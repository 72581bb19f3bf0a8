"""Symplectic maps acting on Gaussian states.

A symplectic matrix ``S`` acts on a state as ``cm -> S cm S^T`` and
``disp -> S disp``. All matrices here are plain ``numpy`` arrays.
"""

from __future__ import annotations

import numpy as np

from .exceptions import InvalidInputError
from .gaussian import GaussianState, symplectic_form

SYMPLECTIC_TOL = 1e-10


def is_symplectic(S, tol: float = SYMPLECTIC_TOL) -> bool:
    S = np.asarray(S, dtype=float)
    if S.ndim != 2 or S.shape[0] != S.shape[1] or S.shape[0] % 2:
        return False
    omega = symplectic_form(S.shape[0] // 2)
    return bool(np.max(np.abs(S @ omega @ S.T - omega)) <= tol)


def squeezer(epsilon: float) -> np.ndarray:
    """Single-mode squeezer ``diag(e^eps, e^-eps)``; stretches ``q`` for ``eps > 0``."""
    return np.diag([np.exp(epsilon), np.exp(-epsilon)])


def rotation(theta: float) -> np.ndarray:
    """Phase rotation ``[[cos, sin], [-sin, cos]]``."""
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, s], [-s, c]])


def embed_on_mode_A(S2) -> np.ndarray:
    """Lift a single-mode map to two modes, acting trivially on mode B."""
    S2 = np.asarray(S2, dtype=float)
    if S2.shape != (2, 2):
        raise InvalidInputError(f"expected a 2x2 map, got shape {S2.shape}")
    out = np.eye(4)
    out[:2, :2] = S2
    return out


def apply(S, state: GaussianState) -> GaussianState:
    """Transform ``state`` by the symplectic matrix ``S``."""
    S = np.asarray(S, dtype=float)
    if S.shape != (state.dim, state.dim):
        raise InvalidInputError(f"map of shape {S.shape} does not act on a {state.modes}-mode state")
    cm = S @ state.cm @ S.T
    return GaussianState((cm + cm.T) / 2, S @ state.disp)


def encoding_map(epsilon: float, theta: float, modes: int = 1) -> np.ndarray:
    """Probe channel ``R(theta) S(eps) R(theta)`` on mode A (identity on mode B).

    The free phase picked up by mode B is assumed compensated, so only mode A
    carries both the unknown phase and the squeezing.
    """
    local = rotation(theta) @ squeezer(epsilon) @ rotation(theta)
    if modes == 1:
        return local
    if modes == 2:
        return embed_on_mode_A(local)
    raise InvalidInputError(f"modes must be 1 or 2, got {modes}")


def encode(state: GaussianState, epsilon: float, theta: float) -> GaussianState:
    return apply(encoding_map(epsilon, theta, state.modes), state)


def partial_transpose_B(cm) -> np.ndarray:
    """Partial transposition on mode B: flips the sign of ``p_B``.

    The result is symmetric but need not be a physical covariance matrix.
    """
    cm = np.asarray(cm, dtype=float)
    if cm.shape != (4, 4):
        raise InvalidInputError(f"partial transpose needs a 4x4 covariance matrix, got {cm.shape}")
    flip = np.array([1.0, 1.0, 1.0, -1.0])
    return flip[:, None] * cm * flip[None, :]


def partial_trace(state: GaussianState, keep="A") -> GaussianState:
    """Reduced single-mode state of mode ``keep`` (``"A"``/``"B"`` or ``0``/``1``)."""
    if state.modes != 2:
        raise InvalidInputError("partial trace needs a two-mode state")
    idx = {"A": 0, "B": 1, 0: 0, 1: 1}.get(keep)
    if idx is None:
        raise InvalidInputError(f"unknown mode {keep!r}")
    sl = slice(2 * idx, 2 * idx + 2)
    return GaussianState(state.cm[sl, sl], state.disp[sl])
