r"""Classical Fisher information, the Cramer-Rao bound and Monte-Carlo checks.

A *family* here is any callable mapping a parameter (a float, or a vector
for several parameters) to a :class:`DiscreteDistribution` or a probability
vector on a fixed outcome space. Derivatives are taken numerically with
central differences and one Richardson step, so any such callable works.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.special import ndtr

from .exceptions import InvalidInputError
from .measures import hellinger_distance_sq

logger = logging.getLogger(__name__)

PROB_SUM_TOL = 1e-12
PSD_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class DiscreteDistribution:
    """Probability vector on a finite outcome space.

    Args:
        probs (array): non-negative entries summing to one within 1e-12
    """

    probs: np.ndarray

    def __init__(self, probs):
        p = np.array(probs, dtype=float).reshape(-1)
        if not np.all(np.isfinite(p)):
            raise InvalidInputError("probabilities must be finite")
        if np.any(p < 0):
            raise InvalidInputError("negative probability")
        if abs(p.sum() - 1) > PROB_SUM_TOL:
            raise InvalidInputError(f"probabilities sum to {p.sum():.15g}, not 1")
        p.flags.writeable = False
        object.__setattr__(self, "probs", p)

    def __len__(self):
        return self.probs.size

    @property
    def support(self) -> np.ndarray:
        """Indices of the outcomes with non-zero probability."""
        return np.flatnonzero(self.probs > 0)


@dataclass(frozen=True)
class GaussianLocationModel:
    """Observations ``x_i = theta + noise`` with Gaussian noise of width ``sigma``."""

    theta: float = 0.0
    sigma: float = 1.0

    def __post_init__(self):
        if not np.isfinite(self.theta):
            raise InvalidInputError("theta must be finite")
        if not (np.isfinite(self.sigma) and self.sigma > 0):
            raise InvalidInputError(f"sigma must be positive, got {self.sigma}")


@dataclass(frozen=True, eq=False)
class FisherMatrix:
    """Symmetric positive-semidefinite Fisher information matrix."""

    entries: np.ndarray
    excluded: tuple = ()

    def __post_init__(self):
        m = np.asarray(self.entries, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise InvalidInputError("Fisher matrix must be square")
        scale = max(1.0, float(np.max(np.abs(m)))) if m.size else 1.0
        if np.max(np.abs(m - m.T), initial=0.0) > 1e-10 * scale:
            raise InvalidInputError("Fisher matrix is not symmetric")
        if m.size and np.linalg.eigvalsh(m)[0] < -PSD_TOL * scale:
            raise InvalidInputError("Fisher matrix is not positive semidefinite")
        m = (m + m.T) / 2
        m.flags.writeable = False
        object.__setattr__(self, "entries", m)

    @property
    def shape(self):
        return self.entries.shape

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.entries, dtype=dtype)


@dataclass(frozen=True)
class FisherDiagnostics:
    """Outcomes dropped from the sum: zero at ``theta`` but not at ``theta +- h``."""

    excluded: tuple = ()
    step: float = 0.0


# ~~~~~~~~~~~~~~~~~~~
#  Example families
# ~~~~~~~~~~~~~~~~~~~


def bernoulli_family():
    """``theta -> (1 - theta, theta)``."""

    def family(theta):
        theta = float(theta)
        if not 0 <= theta <= 1:
            raise InvalidInputError(f"Bernoulli parameter must lie in [0, 1], got {theta}")
        return DiscreteDistribution([1 - theta, theta])

    return family


def constant_family(probs):
    """A family that ignores its parameter."""
    dist = DiscreteDistribution(probs)
    return lambda theta: dist


def product_family(*families):
    """Independent coordinates: parameter ``k`` drives ``families[k]``."""

    def family(thetas):
        thetas = np.atleast_1d(np.asarray(thetas, dtype=float))
        if thetas.size != len(families):
            raise InvalidInputError(f"expected {len(families)} parameters, got {thetas.size}")
        out = np.ones(1)
        for f, t in zip(families, thetas):
            out = np.outer(out, _probs(f(t))).ravel()
        return DiscreteDistribution(out / out.sum())

    return family


def _bin_edges(center, sigma, width, span):
    half = int(round(span / width))
    return center + sigma * width * np.arange(-half, half + 1)


def _binned_normal(edges, mu, sigma):
    # interior bins from the cdf, the two tails from the survival functions
    z = (edges - mu) / sigma
    cdf = ndtr(z)
    inner = np.diff(cdf)
    left = cdf[0]
    right = ndtr(-z[-1])
    p = np.concatenate([[left], inner, [right]])
    return p / p.sum()


def binned_gaussian_family(sigma: float = 1.0, center: float = 0.0, width: float = 1 / 50, span: float = 8.0):
    """Gaussian location model observed through fixed bins.

    Bins are ``width * sigma`` wide over ``center +- span * sigma``, plus one
    tail bin on each side, so the outcome space does not move with ``theta``.
    """
    if sigma <= 0 or width <= 0 or span <= 0:
        raise InvalidInputError("sigma, width and span must be positive")
    edges = _bin_edges(center, sigma, width, span)
    return lambda theta: DiscreteDistribution(_binned_normal(edges, float(theta), sigma))


def binned_location_scale_family(sigma: float = 1.0, center: float = 0.0, width: float = 1 / 50, span: float = 8.0):
    """Two-parameter version of :func:`binned_gaussian_family` over ``(mu, sigma)``."""
    if sigma <= 0 or width <= 0 or span <= 0:
        raise InvalidInputError("sigma, width and span must be positive")
    edges = _bin_edges(center, sigma, width, span)

    def family(params):
        mu, s = np.asarray(params, dtype=float)
        if s <= 0:
            raise InvalidInputError("scale must be positive")
        return DiscreteDistribution(_binned_normal(edges, mu, s))

    return family


# ~~~~~~~~~~~~~~~~~~~~~~
#  Fisher information
# ~~~~~~~~~~~~~~~~~~~~~~


def _probs(dist) -> np.ndarray:
    if isinstance(dist, DiscreteDistribution):
        return dist.probs
    return DiscreteDistribution(dist).probs


def default_step(theta) -> float:
    return 1e-4 * max(1.0, float(np.max(np.abs(np.atleast_1d(theta)))))


def _score(family, theta: np.ndarray, k: int, h: float, p0: np.ndarray):
    """Derivative of ``p`` and of ``ln p`` along parameter ``k`` (Richardson-extrapolated)."""
    e = np.zeros_like(theta)
    e[k] = 1.0
    arg = (lambda t: t[0]) if theta.size == 1 else (lambda t: t)
    pp = [_probs(family(arg(theta + s * e))) for s in (h, -h, h / 2, -h / 2)]
    for q in pp:
        if q.shape != p0.shape:
            raise InvalidInputError("the outcome space changes with the parameter")
    d_p = (4 * (pp[2] - pp[3]) / h - (pp[0] - pp[1]) / (2 * h)) / 3
    with np.errstate(divide="ignore", invalid="ignore"):
        lp = [np.log(q) for q in pp]
        d_log = (4 * (lp[2] - lp[3]) / h - (lp[0] - lp[1]) / (2 * h)) / 3
    # ln p is the better-conditioned route; fall back to p'/p where a neighbour vanishes
    ok_log = np.all(np.stack(pp) > 0, axis=0)
    support = p0 > 0
    score = np.zeros_like(p0)
    score[support] = np.where(ok_log[support], d_log[support], d_p[support] / np.where(support, p0, 1)[support])
    excluded = np.flatnonzero(~support & (np.max(np.stack(pp), axis=0) > 0))
    return score, excluded


def fisher_matrix_discrete(family, thetas, h: float | None = None) -> FisherMatrix:
    r"""Fisher matrix :math:`I_{ab} = \sum_{p>0} p\,\partial_a\ln p\,\partial_b\ln p`.

    Outcomes with ``p = 0`` at ``thetas`` are left out of the sum. Those that
    become possible under the perturbation are listed in
    :attr:`FisherMatrix.excluded` and logged.

    Args:
        family: callable ``thetas -> distribution``
        thetas (array): parameter vector
        h (float): finite-difference step, default ``1e-4 * max(1, |theta|)``
    """
    theta = np.atleast_1d(np.asarray(thetas, dtype=float))
    h = default_step(theta) if h is None else float(h)
    if h <= 0:
        raise InvalidInputError(f"step must be positive, got {h}")
    p0 = _probs(family(theta[0] if theta.size == 1 else theta))
    scores, excluded = [], set()
    for k in range(theta.size):
        s, exc = _score(family, theta, k, h, p0)
        scores.append(s)
        excluded.update(int(i) for i in exc)
    scores = np.array(scores)
    if excluded:
        logger.info("Fisher information: excluded %d outcome(s) with p = 0 at theta", len(excluded))
    info = (scores * p0) @ scores.T
    return FisherMatrix(info, tuple(sorted(excluded)))


def fisher_scalar_discrete(family, theta: float, h: float | None = None, return_diagnostics: bool = False):
    """Fisher information ``sum p (d ln p / d theta)^2`` of a one-parameter family.

    Args:
        family: callable ``theta -> distribution``
        theta (float): point of evaluation
        h (float): finite-difference step, default ``1e-4 * max(1, |theta|)``
        return_diagnostics (bool): also return a :class:`FisherDiagnostics`

    Returns:
        float: the Fisher information (and the diagnostics when asked)
    """
    h = default_step(theta) if h is None else float(h)
    fm = fisher_matrix_discrete(family, [float(theta)], h)
    value = max(0.0, float(fm.entries[0, 0]))
    if return_diagnostics:
        return value, FisherDiagnostics(fm.excluded, h)
    return value


def fisher_gaussian_location(model: GaussianLocationModel, n_samples: int = 1) -> float:
    """Fisher information ``N / sigma^2`` of ``N`` samples of a Gaussian location model."""
    if n_samples < 1:
        raise InvalidInputError("n_samples must be at least 1")
    return n_samples / model.sigma**2


def crb_lower_bound(info: float, n_copies: int = 1) -> float:
    """Cramer-Rao bound ``1 / sqrt(N I)`` on the standard deviation of an unbiased estimator."""
    if not info > 0:
        raise InvalidInputError(f"Fisher information must be positive, got {info}")
    if n_copies < 1:
        raise InvalidInputError(f"n_copies must be at least 1, got {n_copies}")
    return float(1 / np.sqrt(n_copies * info))


# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
#  Maximum-likelihood location experiment
# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

MLE_COLUMNS = ("trial_block", "n_samples", "empirical_std", "crb", "ratio")


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed, trial]))


def _estimate(model: GaussianLocationModel, n_samples: int, seed: int, trial: int) -> float:
    # the sample mean is the maximum-likelihood estimate of a Gaussian location
    return float(trial_rng(seed, trial).normal(model.theta, model.sigma, n_samples).mean())


@dataclass(frozen=True, eq=False)
class MleReport:
    """Outcome of :func:`mle_location_experiment`."""

    model: GaussianLocationModel
    n_samples: int
    n_trials: int
    seed: int
    estimates: np.ndarray = field(repr=False)
    blocks: int = 10

    @property
    def mean_estimate(self) -> float:
        return float(np.mean(self.estimates))

    @property
    def empirical_std(self) -> float:
        return float(np.std(self.estimates, ddof=1))

    @property
    def crb(self) -> float:
        return crb_lower_bound(fisher_gaussian_location(self.model), self.n_samples)

    @property
    def ratio(self) -> float:
        return self.empirical_std / self.crb

    @property
    def bias(self) -> float:
        return self.mean_estimate - self.model.theta

    @property
    def bias_tolerance(self) -> float:
        """Three standard errors of the mean estimate."""
        return 3 * self.empirical_std / np.sqrt(self.n_trials)

    def rows(self) -> list[tuple]:
        """CSV rows: one per block of trials, then the pooled ``all`` row."""
        out = []
        crb = self.crb
        for b, chunk in enumerate(np.array_split(self.estimates, self.blocks)):
            if chunk.size < 2:
                continue
            std = float(np.std(chunk, ddof=1))
            out.append((b, self.n_samples, std, crb, std / crb))
        out.append(("all", self.n_samples, self.empirical_std, crb, self.ratio))
        return out


def mle_location_experiment(
    model: GaussianLocationModel,
    n_samples: int,
    n_trials: int,
    seed: int = 0,
    threads: int = 1,
    blocks: int = 10,
) -> MleReport:
    """Repeat the sample-mean estimate ``n_trials`` times and compare its spread with the CRB.

    Trial ``t`` draws from its own stream keyed by ``(seed, t)``, so the
    report does not depend on ``threads``.
    """
    if n_samples < 1:
        raise InvalidInputError("n_samples must be at least 1")
    if n_trials < 100:
        raise InvalidInputError(f"need at least 100 trials, got {n_trials}")
    if blocks < 1:
        raise InvalidInputError("blocks must be at least 1")
    trials = range(n_trials)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            est = list(pool.map(lambda t: _estimate(model, n_samples, seed, t), trials))
    else:
        est = [_estimate(model, n_samples, seed, t) for t in trials]
    return MleReport(model, n_samples, n_trials, seed, np.array(est), blocks)


# ~~~~~~~~~~~~~~~~~~~~~~~~
#  Hellinger expansion
# ~~~~~~~~~~~~~~~~~~~~~~~~


@dataclass(frozen=True, eq=False)
class HellingerReport:
    deltas: np.ndarray
    ratios: np.ndarray
    limit: float


def hellinger_expansion_check(family, theta: float, deltas) -> HellingerReport:
    """Ratios ``d_H^2(p_theta, p_{theta+delta}) / delta^2``, which tend to ``I/4``.

    The limit is extrapolated by fitting a polynomial of degree up to 3 in ``delta``
    (fewer terms when fewer deltas are given).
    """
    deltas = np.atleast_1d(np.asarray(deltas, dtype=float))
    if deltas.size == 0 or np.any(deltas <= 0):
        raise InvalidInputError("deltas must be positive")
    p0 = family(theta)
    ratios = np.array([hellinger_distance_sq(p0, family(theta + d)) / d**2 for d in deltas])
    degree = min(deltas.size - 1, 3)
    limit = float(np.polyfit(deltas, ratios, degree)[-1]) if degree else float(ratios[0])
    return HellingerReport(deltas, ratios, limit)


__all__ = [
    "DiscreteDistribution",
    "FisherDiagnostics",
    "FisherMatrix",
    "GaussianLocationModel",
    "HellingerReport",
    "MLE_COLUMNS",
    "MleReport",
    "bernoulli_family",
    "binned_gaussian_family",
    "binned_location_scale_family",
    "constant_family",
    "crb_lower_bound",
    "fisher_gaussian_location",
    "fisher_matrix_discrete",
    "fisher_scalar_discrete",
    "hellinger_expansion_check",
    "mle_location_experiment",
    "product_family",
]
