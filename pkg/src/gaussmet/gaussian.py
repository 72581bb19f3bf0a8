r"""One- and two-mode Gaussian states in the covariance-matrix picture.

Conventions used throughout the package:

* quadratures are ordered ``(q_A, p_A, q_B, p_B)`` with ``q = a + a^\dagger``
  and ``p = -i(a - a^\dagger)``, so the vacuum covariance matrix is the
  identity and a physical state obeys :math:`\sigma + i\Omega \geq 0`;
* the symplectic form is block diagonal with blocks ``[[0, 1], [-1, 0]]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, TextIO

import numpy as np

from .exceptions import InvalidInputError, NumericalError, StateParseError

#: default tolerance on symplectic eigenvalues for the uncertainty check
PHYSICAL_TOL = 1e-9

_SYMMETRY_RTOL = 1e-12


def symplectic_form(modes: int) -> np.ndarray:
    """Block-diagonal symplectic form for ``modes`` modes."""
    return np.kron(np.eye(modes), np.array([[0.0, 1.0], [-1.0, 0.0]]))


def _as_cm(cm) -> np.ndarray:
    cm = np.asarray(cm, dtype=float)
    if cm.ndim != 2 or cm.shape[0] != cm.shape[1] or cm.shape[0] not in (2, 4):
        raise InvalidInputError(f"covariance matrix must be 2x2 or 4x4, got shape {cm.shape}")
    if not np.all(np.isfinite(cm)):
        raise InvalidInputError("covariance matrix has non-finite entries")
    scale = max(1.0, float(np.max(np.abs(cm))))
    if np.max(np.abs(cm - cm.T)) > _SYMMETRY_RTOL * scale:
        raise InvalidInputError("covariance matrix is not symmetric")
    return cm


def symplectic_eigenvalues(cm, method: str = "spectrum") -> np.ndarray:
    r"""Symplectic eigenvalues of a covariance matrix, sorted ascending.

    The default route diagonalises the Hermitian matrix
    :math:`i\sigma^{1/2}\Omega\sigma^{1/2}`, which shares its spectrum with
    :math:`i\Omega\sigma` but is well conditioned. ``method="closed"`` uses
    :math:`\sqrt{\det\sigma}` for one mode and the invariant formula
    :math:`2\nu_\pm^2 = \Delta \pm \sqrt{\Delta^2 - 4\det\sigma}` for two.

    Args:
        cm (array): symmetric 2x2 or 4x4 covariance matrix
        method (str): ``"spectrum"`` or ``"closed"``

    Returns:
        array: the ``dim/2`` symplectic eigenvalues
    """
    cm = _as_cm(cm)
    n = cm.shape[0] // 2
    if method == "closed":
        return _closed_form_eigenvalues(cm)
    if method != "spectrum":
        raise InvalidInputError(f"unknown method {method!r}")

    omega = symplectic_form(n)
    w, v = np.linalg.eigh(cm)
    if w[0] > 0:
        root = (v * np.sqrt(w)) @ v.T
        spec = np.linalg.eigvalsh(1j * root @ omega @ root)
    else:
        # indefinite input: fall back to the general non-Hermitian problem
        try:
            spec = np.linalg.eigvals(1j * omega @ cm)
        except np.linalg.LinAlgError as exc:
            raise NumericalError("eigen-solver failed", cm=cm) from exc
    nu = np.sort(np.abs(spec))
    return nu[::2].copy()


def _closed_form_eigenvalues(cm: np.ndarray) -> np.ndarray:
    if cm.shape[0] == 2:
        return np.array([np.sqrt(np.linalg.det(cm))])
    alpha, beta, gamma = cm[:2, :2], cm[2:, 2:], cm[:2, 2:]
    delta = np.linalg.det(alpha) + np.linalg.det(beta) + 2 * np.linalg.det(gamma)
    det = np.linalg.det(cm)
    disc = np.sqrt(max(delta**2 - 4 * det, 0.0))
    hi = (delta + disc) / 2
    lo = 2 * det / (delta + disc)
    return np.sqrt(np.array([lo, hi]))


def _min_symplectic_eigenvalue(cm: np.ndarray) -> float:
    # an indefinite matrix can still have |eigenvalues of i Omega cm| >= 1
    if np.linalg.eigvalsh(cm)[0] <= 0:
        return 0.0
    return float(symplectic_eigenvalues(cm)[0])


def check_physical(cm, tol: float = PHYSICAL_TOL) -> bool:
    """Uncertainty check: ``cm`` positive definite with every symplectic eigenvalue >= 1 - tol."""
    return _min_symplectic_eigenvalue(_as_cm(cm)) >= 1 - tol


@dataclass(frozen=True, eq=False)
class GaussianState:
    """Gaussian state of one or two modes.

    Instances are immutable: the stored arrays are read-only copies.

    Args:
        cm (array): covariance matrix (vacuum = identity)
        disp (array): displacement vector; zeros when omitted
        tol (float): physicality tolerance on symplectic eigenvalues
    """

    cm: np.ndarray
    disp: np.ndarray

    def __init__(self, cm, disp=None, tol: float = PHYSICAL_TOL):
        cm = _as_cm(cm)
        cm = (cm + cm.T) / 2
        dim = cm.shape[0]
        disp = np.zeros(dim) if disp is None else np.array(disp, dtype=float).reshape(-1)
        if disp.shape != (dim,):
            raise InvalidInputError(f"displacement must have length {dim}, got {disp.shape[0]}")
        if not np.all(np.isfinite(disp)):
            raise InvalidInputError("displacement has non-finite entries")
        if np.linalg.eigvalsh(cm)[0] <= 0:
            raise InvalidInputError("unphysical covariance matrix: not positive definite")
        nu_min = symplectic_eigenvalues(cm)[0]
        if nu_min < 1 - tol:
            raise InvalidInputError(
                f"unphysical covariance matrix: smallest symplectic eigenvalue {nu_min:.6g} < 1"
            )
        cm.flags.writeable = False
        disp.flags.writeable = False
        object.__setattr__(self, "cm", cm)
        object.__setattr__(self, "disp", disp)

    @property
    def modes(self) -> int:
        return self.cm.shape[0] // 2

    @property
    def dim(self) -> int:
        return self.cm.shape[0]

    def allclose(self, other: "GaussianState", atol: float = 1e-9) -> bool:
        return (
            self.modes == other.modes
            and np.allclose(self.cm, other.cm, rtol=0, atol=atol)
            and np.allclose(self.disp, other.disp, rtol=0, atol=atol)
        )

    def __repr__(self):
        return f"GaussianState(modes={self.modes}, cm={self.cm.tolist()}, disp={self.disp.tolist()})"


def mean_photon_numbers(state: GaussianState) -> np.ndarray:
    """Mean excitation number of each mode, ``(Tr block - 2)/4 + |disp|^2/4``."""
    out = []
    for k in range(state.modes):
        block = state.cm[2 * k : 2 * k + 2, 2 * k : 2 * k + 2]
        d = state.disp[2 * k : 2 * k + 2]
        out.append((np.trace(block) - 2) / 4 + d @ d / 4)
    return np.array(out)


def purity(state: GaussianState) -> float:
    r"""Purity :math:`\mathrm{Tr}\rho^2 = 1/\sqrt{\det\sigma}`."""
    return float(1 / np.sqrt(np.prod(symplectic_eigenvalues(state.cm) ** 2)))


# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
#  Standard families of states
# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~


def vacuum(modes: int = 1) -> GaussianState:
    return GaussianState(np.eye(2 * modes))


def coherent(disp) -> GaussianState:
    """Coherent state with the given quadrature means (any number of modes)."""
    disp = np.asarray(disp, dtype=float)
    return GaussianState(np.eye(disp.size), disp)


def coherent_from_photons(nbar: float, phase: float = 0.0) -> GaussianState:
    """Single-mode coherent state with ``nbar`` mean photons."""
    amp = 2 * np.sqrt(nbar)
    return coherent([amp * np.cos(phase), amp * np.sin(phase)])


def thermal(nbar: float, modes: int = 1) -> GaussianState:
    return GaussianState((2 * nbar + 1) * np.eye(2 * modes))


def squeezed_vacuum(r: float, phi: float = 0.0) -> GaussianState:
    """Pure single-mode squeezed vacuum, ``q`` stretched by ``e^r`` before rotating by ``phi``."""
    c, s = np.cos(phi), np.sin(phi)
    rot = np.array([[c, s], [-s, c]])
    return GaussianState(rot @ np.diag([np.exp(2 * r), np.exp(-2 * r)]) @ rot.T)


def squeezed_from_photons(nbar: float, phi: float = 0.0) -> GaussianState:
    return squeezed_vacuum(np.arcsinh(np.sqrt(nbar)), phi)


def two_mode_cm(a, b, c, d) -> np.ndarray:
    """Standard-form two-mode covariance matrix ``[[a I, diag(c, d)], [diag(c, d), b I]]``."""
    return np.array(
        [
            [a, 0, c, 0],
            [0, a, 0, d],
            [c, 0, b, 0],
            [0, d, 0, b],
        ],
        dtype=float,
    )


def two_mode_squeezed_vacuum(r: float) -> GaussianState:
    """Two-mode squeezed vacuum with ``a = b = cosh 2r`` and ``c = -d = sinh 2r``."""
    return GaussianState(two_mode_cm(np.cosh(2 * r), np.cosh(2 * r), np.sinh(2 * r), -np.sinh(2 * r)))


def tmsv_from_photons(nbar: float) -> GaussianState:
    return two_mode_squeezed_vacuum(np.arcsinh(np.sqrt(nbar)))


# ~~~~~~~~~~~~~~~~
#  Serialization
# ~~~~~~~~~~~~~~~~
#
# One state per line, whitespace separated:
#
#     modes cm[0,0] cm[0,1] ... cm[d-1,d-1] disp[0] ... disp[d-1]
#
# with d = 2*modes and the covariance matrix in row-major order. Floats are
# written with repr() so a round trip is exact. Blank lines and lines starting
# with '#' are ignored.

STATE_FILE_HEADER = "# gaussmet state v1: modes cm(row-major, dim^2) disp(dim)"


def format_state(state: GaussianState) -> str:
    fields = [str(state.modes)]
    fields += [repr(float(x)) for x in state.cm.ravel()]
    fields += [repr(float(x)) for x in state.disp]
    return " ".join(fields)


def parse_state(line: str, lineno: int = 1, tol: float = PHYSICAL_TOL) -> GaussianState:
    tokens = line.split()
    if not tokens:
        raise StateParseError("empty record", lineno)
    try:
        modes = int(tokens[0])
    except ValueError:
        raise StateParseError(f"mode count {tokens[0]!r} is not an integer", lineno) from None
    if modes not in (1, 2):
        raise StateParseError(f"mode count must be 1 or 2, got {modes}", lineno)
    dim = 2 * modes
    expected = 1 + dim * dim + dim
    if len(tokens) != expected:
        raise StateParseError(f"expected {expected} fields for {modes} mode(s), got {len(tokens)}", lineno)
    try:
        values = np.array([float(t) for t in tokens[1:]])
    except ValueError as exc:
        raise StateParseError(str(exc), lineno) from None
    try:
        return GaussianState(values[: dim * dim].reshape(dim, dim), values[dim * dim :], tol=tol)
    except InvalidInputError as exc:
        raise StateParseError(str(exc), lineno) from None


def write_states(states: Iterable[GaussianState], fh: TextIO) -> None:
    fh.write(STATE_FILE_HEADER + "\n")
    for state in states:
        fh.write(format_state(state) + "\n")


def read_states(fh: TextIO) -> Iterator[GaussianState]:
    for lineno, line in enumerate(fh, start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        yield parse_state(stripped, lineno)
