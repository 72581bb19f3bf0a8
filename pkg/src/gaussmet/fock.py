r"""Truncated Fock-space referee for the covariance-matrix code.

States are kept as a factor ``K`` with :math:`\rho = K K^\dagger`, which makes
Hermiticity and positivity automatic and keeps two-mode pure states cheap.
Nothing in the Gaussian code path imports this module; it exists so the
tests and ``gaussmet verify`` can check the closed forms by brute force.

Operator conventions match :mod:`gaussmet.gaussian`: ``q = a + a^\dagger``,
the squeezer is :math:`\exp(\tfrac{\epsilon}{2}(a^{\dagger 2} - a^2))`
(stretches ``q`` by ``e^\epsilon``) and the phase rotation is
:math:`e^{-i\theta\hat n}`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm
from scipy.special import gammaln
from scipy.stats import poisson

from .exceptions import InvalidInputError, NumericalError, TruncationError

DEFAULT_DIM = 60
LEAK_TOL = 1e-8
#: eigenvalue pairs with ``p_j + p_k`` below this are left out of the SLD sum
SLD_CUTOFF = 1e-12
_RANK_TOL = 1e-14


def annihilation(dim: int) -> np.ndarray:
    """Truncated annihilation operator, ``<n-1|a|n> = sqrt(n)``."""
    return np.diag(np.sqrt(np.arange(1, dim, dtype=float)), 1)


@dataclass(frozen=True, eq=False)
class FockDensityMatrix:
    """Density matrix ``K K^dagger`` on ``modes`` modes truncated at ``dim`` levels each."""

    factor: np.ndarray
    dim: int
    modes: int = 1

    def __post_init__(self):
        K = np.asarray(self.factor, dtype=complex)
        if K.ndim == 1:
            K = K[:, None]
        if K.shape[0] != self.dim**self.modes:
            raise InvalidInputError(f"factor has {K.shape[0]} rows, expected {self.dim ** self.modes}")
        object.__setattr__(self, "factor", K)

    @property
    def matrix(self) -> np.ndarray:
        return self.factor @ self.factor.conj().T

    @property
    def trace(self) -> float:
        return float(np.vdot(self.factor, self.factor).real)

    def _tensor(self):
        return self.factor.reshape((self.dim,) * self.modes + (-1,))

    def apply_local(self, op: np.ndarray, mode: int = 0) -> np.ndarray:
        """``(op acting on mode) K``, returned as a factor."""
        T = np.moveaxis(np.tensordot(op, self._tensor(), axes=([1], [mode])), 0, mode)
        return T.reshape(self.factor.shape)

    def transform(self, op: np.ndarray, mode: int = 0) -> "FockDensityMatrix":
        """Conjugate by an operator acting on one mode."""
        return FockDensityMatrix(self.apply_local(op, mode), self.dim, self.modes)

    def populations(self, mode: int = 0) -> np.ndarray:
        """Photon-number distribution of one mode."""
        T = np.moveaxis(self._tensor(), mode, 0).reshape(self.dim, -1)
        return np.sum(np.abs(T) ** 2, axis=1)

    def mean_photon_numbers(self) -> np.ndarray:
        n = np.arange(self.dim)
        return np.array([self.populations(k) @ n for k in range(self.modes)])

    def moments(self) -> tuple[np.ndarray, np.ndarray]:
        """Quadrature means and covariance matrix in the package convention."""
        a = annihilation(self.dim)
        q, p = a + a.conj().T, -1j * (a - a.conj().T)
        vecs = []
        for k in range(self.modes):
            vecs += [self.apply_local(q, k), self.apply_local(p, k)]
        mean = np.array([np.vdot(self.factor, v).real for v in vecs])
        second = np.array([[np.vdot(u, v) for v in vecs] for u in vecs])
        cm = second.real - np.outer(mean, mean)
        return mean, (cm + cm.T) / 2


# ~~~~~~~~~~~~~~~~~
#  State builders
# ~~~~~~~~~~~~~~~~~


def _suggest_dim(leak_of, dim, leak_tol):
    d = dim
    while leak_of(d) > leak_tol:
        d = int(d * 1.25) + 1
        if d > 100_000:
            break
    return d


def _check_leak(leak_of, dim, leak_tol, what):
    leak = float(leak_of(dim))
    if leak > leak_tol:
        raise TruncationError(
            f"{what}: population {leak:.3g} beyond {dim} levels exceeds {leak_tol:g}",
            leak=leak,
            suggested_dim=_suggest_dim(leak_of, dim, leak_tol),
        )


def _squeezed_amplitudes(r: float, dim: int) -> np.ndarray:
    m = np.arange(dim // 2 + dim % 2)
    log_mag = m * np.log(np.tanh(abs(r))) if r else np.where(m == 0, 0.0, -np.inf)
    log_c = log_mag + 0.5 * gammaln(2 * m + 1) - m * np.log(2) - gammaln(m + 1) - 0.5 * np.log(np.cosh(r))
    c = np.exp(log_c) * np.sign(r) ** m if r else np.exp(log_c)
    out = np.zeros(dim)
    out[0 : 2 * m.size : 2] = c[: (dim + 1) // 2]
    return out


def build_state(family: str, dim: int = DEFAULT_DIM, leak_tol: float = LEAK_TOL, **params) -> FockDensityMatrix:
    """Fock representation of a standard Gaussian state.

    Families and parameters:

    * ``vacuum`` (``modes=1``)
    * ``coherent``: ``alpha`` (complex), or ``nbar`` and ``phase``
    * ``thermal``: ``nbar``
    * ``squeezed``: ``r`` and ``phi``, matching :func:`gaussmet.gaussian.squeezed_vacuum`
    * ``tmsv``: ``r``, written in its Schmidt basis

    The state is not renormalised, so its trace is one minus the truncated
    population.

    Raises:
        TruncationError: when more than ``leak_tol`` of the population falls
            beyond ``dim`` levels; carries a suggested dimension
    """
    if dim < 2:
        raise InvalidInputError("dim must be at least 2")
    if family == "vacuum":
        modes = params.get("modes", 1)
        K = np.zeros(dim**modes, dtype=complex)
        K[0] = 1
        return FockDensityMatrix(K, dim, modes)
    if family == "coherent":
        alpha = complex(params["alpha"]) if "alpha" in params else np.sqrt(params["nbar"]) * np.exp(1j * params.get("phase", 0.0))
        nbar = abs(alpha) ** 2
        _check_leak(lambda d: poisson.sf(d - 1, nbar), dim, leak_tol, "coherent")
        n = np.arange(dim)
        with np.errstate(divide="ignore"):
            log_mag = -nbar / 2 + n * np.log(abs(alpha)) - 0.5 * gammaln(n + 1)
        K = np.exp(log_mag) * np.exp(1j * n * np.angle(alpha))
        if alpha == 0:
            K = np.eye(dim)[0].astype(complex)
        return FockDensityMatrix(K, dim)
    if family == "thermal":
        nbar = float(params["nbar"])
        if nbar < 0:
            raise InvalidInputError("nbar must be non-negative")
        ratio = nbar / (nbar + 1)
        _check_leak(lambda d: ratio**d, dim, leak_tol, "thermal")
        p = ratio ** np.arange(dim) / (nbar + 1)
        return FockDensityMatrix(np.diag(np.sqrt(p)), dim)
    if family == "squeezed":
        r, phi = float(params["r"]), float(params.get("phi", 0.0))
        _check_leak(lambda d: max(0.0, 1 - np.sum(_squeezed_amplitudes(r, d) ** 2)), dim, leak_tol, "squeezed")
        K = _squeezed_amplitudes(r, dim) * np.exp(-1j * phi * np.arange(dim))
        return FockDensityMatrix(K, dim)
    if family == "tmsv":
        r = float(params["r"])
        lam = np.tanh(r)
        _check_leak(lambda d: lam ** (2 * d), dim, leak_tol, "tmsv")
        K = np.zeros((dim, dim), dtype=complex)
        K[np.arange(dim), np.arange(dim)] = lam ** np.arange(dim) / np.cosh(r)
        return FockDensityMatrix(K.reshape(-1), dim, 2)
    raise InvalidInputError(f"unknown family {family!r}")


def fixture_states(dim: int = DEFAULT_DIM):
    """The reference states shared by the oracle checks, as ``{name: (fock, gaussian)}``."""
    from . import gaussian as g

    return {
        "vacuum": (build_state("vacuum", dim), g.vacuum()),
        "coherent(n=1)": (build_state("coherent", dim, nbar=1.0), g.coherent_from_photons(1.0)),
        "thermal(n=1)": (build_state("thermal", dim, nbar=1.0), g.thermal(1.0)),
        "squeezed(r=0.5)": (build_state("squeezed", dim, r=0.5), g.squeezed_vacuum(0.5)),
        "tmsv(r=0.5)": (build_state("tmsv", dim, r=0.5), g.two_mode_squeezed_vacuum(0.5)),
    }


# ~~~~~~~~~~~~~
#  Evolutions
# ~~~~~~~~~~~~~


def apply_squeezer(rho: FockDensityMatrix, epsilon: float, mode: int = 0, leak_tol: float = LEAK_TOL) -> FockDensityMatrix:
    """Conjugate by ``exp(eps/2 (a^dagger^2 - a^2))`` acting on ``mode``.

    The exponential is taken in a space with extra headroom, the population
    pushed beyond ``rho.dim`` is measured, and the result is cut back.

    Raises:
        TruncationError: when the pushed-out population exceeds ``leak_tol``
    """
    if epsilon == 0:
        return rho
    pad = max(20, rho.dim // 2)
    big = rho.dim + pad
    a = annihilation(big)
    U = expm(0.5 * epsilon * (a.T @ a.T - a @ a))
    T = np.moveaxis(rho._tensor(), mode, 0).reshape(rho.dim, -1)
    out = U[:, : rho.dim] @ T
    leak = float(np.sum(np.abs(out[rho.dim :]) ** 2))
    if leak > leak_tol:
        raise TruncationError(
            f"squeezing by {epsilon:g} pushes {leak:.3g} of the population beyond {rho.dim} levels",
            leak=leak,
            suggested_dim=rho.dim + pad,
        )
    out = out[: rho.dim].reshape((rho.dim,) + np.moveaxis(rho._tensor(), mode, 0).shape[1:])
    out = np.moveaxis(out, 0, mode).reshape(rho.factor.shape)
    return FockDensityMatrix(out, rho.dim, rho.modes)


def apply_rotation(rho: FockDensityMatrix, theta: float, mode: int = 0) -> FockDensityMatrix:
    """Conjugate by ``exp(-i theta n)`` on ``mode``."""
    return rho.transform(np.diag(np.exp(-1j * theta * np.arange(rho.dim))), mode)


def apply_two_mode_squeezer(rho: FockDensityMatrix, r: float) -> FockDensityMatrix:
    """Conjugate a two-mode state by ``exp(r (a^dagger b^dagger - a b))``.

    Uses a dense exponential on the truncated space, so keep ``dim`` modest
    (about 25); the edge error is governed by the population near ``dim``.
    """
    if rho.modes != 2:
        raise InvalidInputError("needs a two-mode state")
    a = annihilation(rho.dim)
    ab = np.kron(a, a)
    U = expm(r * (ab.T - ab))
    return FockDensityMatrix(U @ rho.factor, rho.dim, 2)


def product_state(r1: FockDensityMatrix, r2: FockDensityMatrix) -> FockDensityMatrix:
    """Tensor product of two single-mode states with the same truncation."""
    if r1.modes != 1 or r2.modes != 1 or r1.dim != r2.dim:
        raise InvalidInputError("need two single-mode states of equal dimension")
    K = np.einsum("ia,jb->ijab", r1.factor, r2.factor).reshape(r1.dim**2, -1)
    return FockDensityMatrix(K, r1.dim, 2)


def encode_fock(rho: FockDensityMatrix, epsilon: float, theta: float) -> FockDensityMatrix:
    """Probe channel: rotate by ``theta``, squeeze by ``epsilon``, rotate by ``theta`` (mode A)."""
    return apply_rotation(apply_squeezer(apply_rotation(rho, theta), epsilon), theta)


# ~~~~~~~~~~~~~~~~~~~~~~~~
#  Fidelity and SLD QFI
# ~~~~~~~~~~~~~~~~~~~~~~~~


def fidelity_fock(r1: FockDensityMatrix, r2: FockDensityMatrix) -> float:
    r"""Squared Uhlmann fidelity, :math:`\|K_1^\dagger K_2\|_*^2`.

    For :math:`\rho_i = K_i K_i^\dagger` the trace norm of
    :math:`\sqrt{\rho_1}\sqrt{\rho_2}` equals the nuclear norm of
    :math:`K_1^\dagger K_2`, which needs no matrix square roots.
    """
    if r1.factor.shape[0] != r2.factor.shape[0]:
        raise InvalidInputError("states live in different spaces")
    try:
        s = np.linalg.svd(r1.factor.conj().T @ r2.factor, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalError("SVD failed in the Fock fidelity") from exc
    return float(np.sum(s) ** 2)


def qfi_sld(builder, h: float = 1e-4, cutoff: float = SLD_CUTOFF) -> float:
    r"""QFI from the spectral form of the symmetric logarithmic derivative.

    .. math:: H = 2\sum_{p_j + p_k > \text{cutoff}} |\langle j|\partial\rho|k\rangle|^2 / (p_j + p_k)

    with :math:`\partial\rho` from a central difference of ``builder`` at
    ``+-h``. Everything is done in the orthonormal span of the three
    factors, which contains the supports of all the matrices involved.

    Args:
        builder: callable ``eps -> FockDensityMatrix``; evaluated at 0 and ``+-h``
        h (float): finite-difference step
        cutoff (float): pairs with ``p_j + p_k <= cutoff`` are dropped
    """
    if h <= 0:
        raise InvalidInputError("h must be positive")
    K0, Kp, Km = (builder(e).factor for e in (0.0, h, -h))
    try:
        U, s, _ = np.linalg.svd(np.hstack([K0, Kp, Km]), full_matrices=False)
        Q = U[:, s > _RANK_TOL * s[0]]
        k0, kp, km = (Q.conj().T @ K for K in (K0, Kp, Km))
        rho = k0 @ k0.conj().T
        drho = (kp @ kp.conj().T - km @ km.conj().T) / (2 * h)
        p, V = np.linalg.eigh(rho)
    except np.linalg.LinAlgError as exc:
        raise NumericalError("eigen-decomposition failed in the SLD QFI") from exc
    d = V.conj().T @ drho @ V
    denom = p[:, None] + p[None, :]
    mask = denom > cutoff
    return float(max(0.0, 2 * np.sum(np.abs(d[mask]) ** 2 / denom[mask])))


def qfi_sld_at_theta(rho: FockDensityMatrix, theta: float, h: float = 1e-4) -> float:
    """SLD QFI about the squeezing parameter of the probe channel at phase ``theta``."""
    return qfi_sld(lambda e: encode_fock(rho, e, theta), h)


__all__ = [
    "FockDensityMatrix",
    "annihilation",
    "apply_rotation",
    "apply_squeezer",
    "apply_two_mode_squeezer",
    "build_state",
    "encode_fock",
    "fidelity_fock",
    "fixture_states",
    "product_state",
    "qfi_sld",
    "qfi_sld_at_theta",
]
