"""Random physical Gaussian states and the average-QFI scatter experiments.

Every state is drawn from its own random stream keyed by ``(seed, index)``,
so a dataset is identical whether it is produced serially, in parallel, or
in pieces.

Parameter laws (all uniform, all configurable through :class:`StateClassSpec`):

=====================  ====================================================
family                 draw
=====================  ====================================================
general-1mode          ``[[a, g], [g, b]]``, a, b in [1, a_max], |g| <= g_max,
                       displacement uniform in a disc of radius r_max
general-2mode          the five-parameter two-mode matrix with a single-mode
                       displacement on A; correlations |c|, |d| <= c_max
separable-standard     ``diag(a1, b1, b2, b2)``, no displacement
discordant             ``[[a I, c I], [c I, b I]]``, c != 0, displacement on A
entangled-pure         two-mode squeezed vacuum, r in [0, r_sq_max]
coherent               vacuum covariance, displacement in the disc
thermal                ``(2 n + 1) I``, n in [0, n_max]
squeezed-pure          squeezed vacuum, r in [0, r_sq_max], random axis
=====================  ====================================================

Candidates failing the uncertainty relation are rejected, never repaired.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Iterator

import numpy as np

from .exceptions import ConfigurationError, GaussmetError, InvalidInputError
from .gaussian import (
    GaussianState,
    check_physical,
    mean_photon_numbers,
    purity,
    squeezed_vacuum,
    two_mode_squeezed_vacuum,
)
from .measures import coherence, log_negativity
from .qfi import DEFAULT_DELTA, DEFAULT_NODES, avg_qfi

logger = logging.getLogger(__name__)

FAMILIES = (
    "general-1mode",
    "general-2mode",
    "separable-standard",
    "discordant",
    "entangled-pure",
    "coherent",
    "thermal",
    "squeezed-pure",
)

MAX_ATTEMPTS_PER_STATE = 10_000
ACCEPTANCE_WINDOW = 10_000
MIN_ACCEPTANCE_RATE = 0.01


@dataclass(frozen=True)
class StateClassSpec:
    """Family name, parameter ranges, and seed of a sampled state class."""

    family: str = "general-1mode"
    seed: int = 0
    a_max: float = 9.0
    g_max: float = 9.0
    c_max: float = 9.0
    r_max: float = 4.0
    r_sq_max: float = 1.5
    n_max: float = 4.0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise InvalidInputError(f"unknown family {self.family!r}; choose from {FAMILIES}")
        if self.a_max < 1:
            raise InvalidInputError("a_max must be at least 1")
        for name in ("g_max", "c_max", "r_max", "r_sq_max", "n_max"):
            if getattr(self, name) < 0:
                raise InvalidInputError(f"{name} must be non-negative")

    def as_dict(self) -> dict:
        return asdict(self)


def _disc(rng, radius):
    rho = radius * np.sqrt(rng.uniform())
    phi = rng.uniform(0, 2 * np.pi)
    return np.array([rho * np.cos(phi), rho * np.sin(phi)])


def _candidate(spec: StateClassSpec, rng: np.random.Generator):
    """One draw of ``(cm, disp)``; the covariance matrix may be unphysical."""
    fam = spec.family
    if fam == "general-1mode":
        a, b = rng.uniform(1, spec.a_max, 2)
        g = rng.uniform(-spec.g_max, spec.g_max)
        return np.array([[a, g], [g, b]]), _disc(rng, spec.r_max)
    if fam == "general-2mode":
        a1, b1, b2 = rng.uniform(1, spec.a_max, 3)
        g = rng.uniform(-spec.g_max, spec.g_max)
        c, d = rng.uniform(-spec.c_max, spec.c_max, 2)
        cm = np.array(
            [
                [a1, g, c, 0],
                [g, b1, 0, d],
                [c, 0, b2, 0],
                [0, d, 0, b2],
            ]
        )
        return cm, np.concatenate([_disc(rng, spec.r_max), [0.0, 0.0]])
    if fam == "separable-standard":
        a1, b1, b2 = rng.uniform(1, spec.a_max, 3)
        return np.diag([a1, b1, b2, b2]), np.zeros(4)
    if fam == "discordant":
        a, b = rng.uniform(1, spec.a_max, 2)
        c = rng.uniform(-spec.c_max, spec.c_max)
        if c == 0:
            return None
        block = np.array([[a, c], [c, b]])
        return np.kron(block, np.eye(2)), np.concatenate([_disc(rng, spec.r_max), [0.0, 0.0]])
    if fam == "entangled-pure":
        st = two_mode_squeezed_vacuum(rng.uniform(0, spec.r_sq_max))
        return st.cm, st.disp
    if fam == "coherent":
        return np.eye(2), _disc(rng, spec.r_max)
    if fam == "thermal":
        n = rng.uniform(0, spec.n_max)
        return (2 * n + 1) * np.eye(2), np.zeros(2)
    if fam == "squeezed-pure":
        r = rng.uniform(0, spec.r_sq_max)
        st = squeezed_vacuum(r, rng.uniform(0, np.pi))
        return st.cm, st.disp
    raise InvalidInputError(f"unknown family {fam!r}")


def state_rng(seed: int, index: int) -> np.random.Generator:
    """Independent generator for state ``index`` of a run seeded with ``seed``."""
    return np.random.default_rng(np.random.SeedSequence([seed, index]))


def sample_one(spec: StateClassSpec, index: int) -> tuple[GaussianState, int]:
    """Draw state ``index``; returns it with the number of candidates tried."""
    rng = state_rng(spec.seed, index)
    for attempt in range(1, MAX_ATTEMPTS_PER_STATE + 1):
        cand = _candidate(spec, rng)
        if cand is None:
            continue
        cm, disp = cand
        if check_physical(cm):
            return GaussianState(cm, disp), attempt
    raise ConfigurationError(
        f"{spec.family}: no physical state in {MAX_ATTEMPTS_PER_STATE} draws; widen the parameter ranges"
    )


def sample(spec: StateClassSpec, count: int, start: int = 0) -> Iterator[GaussianState]:
    """Yield ``count`` physical states with indices ``start, start + 1, ...``.

    Raises:
        ConfigurationError: when fewer than 1% of the candidates are accepted
            over a window of 10^4 draws
    """
    if count < 0:
        raise InvalidInputError("count must be non-negative")
    tried = accepted = 0
    for index in range(start, start + count):
        state, attempts = sample_one(spec, index)
        tried += attempts
        accepted += 1
        if tried >= ACCEPTANCE_WINDOW:
            if accepted / tried < MIN_ACCEPTANCE_RATE:
                raise ConfigurationError(
                    f"{spec.family}: acceptance rate {accepted / tried:.2%} below 1%; adjust the ranges"
                )
            tried = accepted = 0
        yield state


# ~~~~~~~~~~~~~~~~~~~~~
#  Scatter experiments
# ~~~~~~~~~~~~~~~~~~~~~

DATASET_COLUMNS = ("state_id", "family", "n_A", "avg_qfi", "E_N", "coherence", "purity", "flags")


@dataclass
class ScatterRow:
    state_id: int
    family: str
    n_A: float
    avg_qfi: float
    E_N: float
    coherence: float
    purity: float
    flags: list[str] = field(default_factory=list)
    state: GaussianState | None = field(default=None, repr=False, compare=False)

    def as_tuple(self):
        return (self.state_id, self.family, self.n_A, self.avg_qfi, self.E_N, self.coherence, self.purity, ";".join(self.flags))


@dataclass
class ScatterDataset:
    spec: StateClassSpec
    rows: list[ScatterRow]
    nodes: int
    delta: float

    def __len__(self):
        return len(self.rows)

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(r, name) for r in self.rows], dtype=float)

    @property
    def flagged(self) -> list[ScatterRow]:
        return [r for r in self.rows if r.flags]


def _evaluate(spec: StateClassSpec, index: int, state: GaussianState, nodes: int, delta: float) -> ScatterRow:
    n_A = float(mean_photon_numbers(state)[0])
    e_n = log_negativity(state).log_negativity if state.modes == 2 else float("nan")
    row = ScatterRow(index, spec.family, n_A, float("nan"), e_n, coherence(state), purity(state), state=state)
    try:
        report = avg_qfi(state, nodes=nodes, delta=delta)
    except GaussmetError as exc:
        logger.warning("state %d: %s", index, exc)
        row.flags.append(f"error:{type(exc).__name__}")
        return row
    row.avg_qfi = report.avg_qfi
    row.flags.extend(report.flags)
    return row


def scatter_experiment(
    spec: StateClassSpec,
    count: int,
    nodes: int = DEFAULT_NODES,
    delta: float = DEFAULT_DELTA,
    threads: int = 1,
) -> ScatterDataset:
    """Sample ``count`` states and tabulate ``n_A``, average QFI, E_N, coherence, purity.

    Rows are sorted by ``n_A`` (ties by ``state_id``). A state whose QFI
    evaluation fails keeps its row, with NaN QFI and a flag.
    """
    if count < 0:
        raise InvalidInputError("count must be non-negative")
    states = list(sample(spec, count))
    jobs = [(spec, i, st, nodes, delta) for i, st in enumerate(states)]
    if threads > 1 and count > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(lambda job: _evaluate(*job), jobs))
    else:
        rows = [_evaluate(*job) for job in jobs]
    rows.sort(key=lambda r: (r.n_A, r.state_id))
    return ScatterDataset(spec, rows, nodes, delta)


def envelope(dataset: ScatterDataset, bins: int = 40, reference=None) -> list[dict]:
    """Upper envelope of the average QFI in ``bins`` equal-width ``n_A`` bins.

    With ``reference`` (a callable of ``n_A``), each bin also reports the
    largest ratio ``avg_qfi / reference(n_A)`` among its states.
    """
    n = dataset.column("n_A")
    h = dataset.column("avg_qfi")
    ok = np.isfinite(h)
    n, h = n[ok], h[ok]
    if n.size == 0:
        return []
    edges = np.linspace(n.min(), n.max(), bins + 1)
    which = np.clip(np.searchsorted(edges, n, side="right") - 1, 0, bins - 1)
    out = []
    for b in range(bins):
        mask = which == b
        if not mask.any():
            continue
        item = {
            "bin": b,
            "n_lo": float(edges[b]),
            "n_hi": float(edges[b + 1]),
            "count": int(mask.sum()),
            "max_avg_qfi": float(h[mask].max()),
            "min_avg_qfi": float(h[mask].min()),
        }
        if reference is not None:
            item["max_ratio"] = float(np.max(h[mask] / reference(n[mask])))
        out.append(item)
    return out
