"""Reference formulas that share no code with the package internals."""

import numpy as np

OMEGA1 = np.array([[0.0, 1.0], [-1.0, 0.0]])


def omega(modes):
    return np.kron(np.eye(modes), OMEGA1)


def rot(t):
    return np.array([[np.cos(t), np.sin(t)], [-np.sin(t), np.cos(t)]])


def channel(eps, theta, modes):
    T = np.eye(2 * modes)
    T[:2, :2] = rot(theta) @ np.diag([np.exp(eps), np.exp(-eps)]) @ rot(theta)
    return T


def channel_derivative(theta, modes):
    dT = np.zeros((2 * modes, 2 * modes))
    dT[:2, :2] = rot(theta) @ np.diag([1.0, -1.0]) @ rot(theta)
    return dT


def qfi_real_form(cm, disp, theta):
    """Analytic QFI at eps = 0 from the covariance-matrix derivative.

    H = 1/2 vec(s')^T (s (x) s - W (x) W)^+ vec(s') + d'^T s^-1 d'.
    The pseudo-inverse makes it valid for pure states as well.
    """
    cm, disp = np.asarray(cm, float), np.asarray(disp, float)
    modes = cm.shape[0] // 2
    W = omega(modes)
    T0, dT = channel(0.0, theta, modes), channel_derivative(theta, modes)
    s = T0 @ cm @ T0.T
    ds = dT @ cm @ T0.T + T0 @ cm @ dT.T
    dd = dT @ disp
    M = np.kron(s, s) - np.kron(W, W)
    return 0.5 * ds.ravel() @ np.linalg.pinv(M, rcond=1e-10) @ ds.ravel() + dd @ np.linalg.solve(s, dd)


def avg_qfi_diag(a, b):
    """Phase-averaged QFI of an undisplaced single-mode state with cm = diag(a, b)."""
    s = a + b
    return (s * s + 4 * a * b) / (2 * (a * b + 1))


def scutaru_fidelity(cm1, d1, cm2, d2):
    """Single-mode fidelity (squared convention) written out from determinants."""
    delta = np.linalg.det(cm1 + cm2)
    lam = (np.linalg.det(cm1) - 1) * (np.linalg.det(cm2) - 1)
    dd = np.asarray(d1, float) - np.asarray(d2, float)
    return 2 / (np.sqrt(delta + lam) - np.sqrt(lam)) * np.exp(-0.5 * dd @ np.linalg.solve(cm1 + cm2, dd))
