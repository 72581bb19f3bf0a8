"""Command-line front end: ``gaussmet {bounds,sweep,qfi,classical,verify}``.

Exit codes: 0 success, 1 usage error, 2 numerical failure (including
flagged sweep rows and failed oracle checks), 3 I/O or unreadable input.
"""

from __future__ import annotations

import argparse
import contextlib
import logging
import os
import sys

import numpy as np

from . import __version__
from .classical import MLE_COLUMNS, GaussianLocationModel, mle_location_experiment
from .exceptions import GaussmetError, InvalidInputError, NumericalError, StateParseError, TruncationError
from .gaussian import read_states, write_states
from .output import write_csv
from .qfi import BOUND_FAMILIES, DEFAULT_DELTA, DEFAULT_NODES, avg_qfi, bound_curve, quantum_crb
from .sampler import DATASET_COLUMNS, FAMILIES, StateClassSpec, scatter_experiment

EXIT_OK, EXIT_USAGE, EXIT_NUMERICAL, EXIT_IO = 0, 1, 2, 3
CRB_COPIES = (1, 100, 10_000)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be a positive integer, got {value}")
    return value


def _count(text):
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be non-negative, got {value}")
    return value


def _positive_float(text):
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {value}")
    return value


def _nodes(text):
    value = int(text)
    if value < 16 or value & (value - 1):
        raise argparse.ArgumentTypeError(f"must be a power of two >= 16, got {value}")
    return value


def _delta(text):
    value = float(text)
    if not 0 < value <= 1e-2:
        raise argparse.ArgumentTypeError(f"must lie in (0, 1e-2], got {value}")
    return value


def _threads(args) -> int:
    if args.threads is not None:
        return args.threads
    env = os.environ.get("GAUSSMET_THREADS")
    if not env:
        return 1
    try:
        value = int(env)
    except ValueError:
        raise UsageError(f"GAUSSMET_THREADS must be an integer, got {env!r}") from None
    if value < 1:
        raise UsageError(f"GAUSSMET_THREADS must be positive, got {value}")
    return value


@contextlib.contextmanager
def _open_out(path):
    if path in (None, "-"):
        yield sys.stdout
        return
    with open(path, "w", newline="") as fh:
        yield fh


def _config(args, **extra) -> dict:
    skip = {"func", "out", "threads", "verbose", "dump_states"}
    cfg = {k: v for k, v in vars(args).items() if k not in skip}
    cfg.update(extra)
    return cfg


# ~~~~~~~~~~~~~
#  Subcommands
# ~~~~~~~~~~~~~


def cmd_bounds(args) -> int:
    n = np.linspace(0.0, args.n_max, args.points)
    rows = []
    for family in BOUND_FAMILIES:
        for n_a, value in zip(n, np.atleast_1d(bound_curve(family, n))):
            rows.append((family, float(n_a), float(value)))
    with _open_out(args.out) as fh:
        write_csv(fh, ("family", "n_A", "avg_qfi"), rows, "bounds", _config(args))
    return EXIT_OK


def cmd_sweep(args) -> int:
    spec = StateClassSpec(
        family=args.family,
        seed=args.seed,
        a_max=args.a_max,
        g_max=args.g_max,
        c_max=args.c_max,
        r_max=args.r_max,
        r_sq_max=args.r_sq_max,
        n_max=args.n_max,
    )
    ds = scatter_experiment(spec, args.count, nodes=args.nodes, delta=args.delta, threads=_threads(args))
    with _open_out(args.out) as fh:
        write_csv(fh, DATASET_COLUMNS, (r.as_tuple() for r in ds.rows), "sweep", _config(args))
    if args.dump_states:
        with open(args.dump_states, "w") as fh:
            write_states((r.state for r in sorted(ds.rows, key=lambda r: r.state_id)), fh)
    if ds.flagged:
        print(f"{len(ds.flagged)} of {len(ds)} rows flagged", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


def cmd_qfi(args) -> int:
    with open(args.state_file) as fh:
        states = list(read_states(fh))
    rows, status = [], EXIT_OK
    for i, state in enumerate(states):
        rep = avg_qfi(state, nodes=args.nodes, delta=args.delta, max_nodes=args.max_nodes)
        crbs = [quantum_crb(rep.avg_qfi, m) if rep.avg_qfi > 0 else float("nan") for m in CRB_COPIES]
        print(
            f"state {i}: n_A={rep.n_A:.6g} avg_qfi={rep.avg_qfi:.9g} convergence_delta={rep.convergence_delta:.3g} "
            + " ".join(f"crb(M={m})={c:.6g}" for m, c in zip(CRB_COPIES, crbs)),
            file=sys.stderr if args.out in (None, "-") else sys.stdout,
        )
        if rep.flags:
            status = EXIT_NUMERICAL
        rows.append((i, rep.n_A, rep.avg_qfi, rep.convergence_delta, rep.quadrature_nodes, *crbs, ";".join(rep.flags)))
    columns = ("state", "n_A", "avg_qfi", "convergence_delta", "nodes", *(f"crb_M{m}" for m in CRB_COPIES), "flags")
    with _open_out(args.out) as fh:
        write_csv(fh, columns, rows, "qfi", _config(args))
    return status


def cmd_classical(args) -> int:
    if args.trials < 100:
        raise UsageError(f"--trials must be at least 100, got {args.trials}")
    model = GaussianLocationModel(args.theta, args.sigma)
    rep = mle_location_experiment(model, args.n_samples, args.trials, args.seed, threads=_threads(args), blocks=args.blocks)
    with _open_out(args.out) as fh:
        write_csv(fh, MLE_COLUMNS, rep.rows(), "classical", _config(args))
    print(
        f"mean={rep.mean_estimate:.6g} std={rep.empirical_std:.6g} crb={rep.crb:.6g} ratio={rep.ratio:.4f}",
        file=sys.stderr,
    )
    return EXIT_OK


def verify_checks(level: str, dim: int = 60):
    """Gaussian formulas against the Fock oracle; yields ``(name, delta, tol, ok)``."""
    from .fock import fidelity_fock, fixture_states, qfi_sld_at_theta
    from .measures import gaussian_fidelity
    from .qfi import qfi_at_theta

    fx = fixture_states(dim)
    names = ["vacuum", "coherent(n=1)", "thermal(n=1)"] if level == "quick" else list(fx)
    for i, a in enumerate(names):
        for b in names[i:]:
            (fa, ga), (fb, gb) = fx[a], fx[b]
            if ga.modes != gb.modes:
                continue
            d = abs(fidelity_fock(fa, fb) - gaussian_fidelity(ga, gb))
            yield f"fidelity {a} | {b}", d, 1e-4, d <= 1e-4
    if level == "quick":
        return
    for name in names:
        fock_state, gauss_state = fx[name]
        for theta in (0.0, 0.4, 1.3, 2.2):
            ref = qfi_sld_at_theta(fock_state, theta)
            d = abs(qfi_at_theta(gauss_state, theta) - ref) / ref
            yield f"qfi {name} theta={theta}", d, 1e-2, d <= 1e-2


def cmd_verify(args) -> int:
    failures = 0
    try:
        for name, delta, tol, ok in verify_checks(args.level, args.dim):
            failures += not ok
            print(f"{'PASS' if ok else 'FAIL'}  {name:<45s} delta={delta:.3e} tol={tol:.0e}")
    except TruncationError as exc:
        print(f"FAIL  oracle truncation: {exc}; rerun with --dim {exc.suggested_dim}")
        return EXIT_NUMERICAL
    print(f"{failures} failure(s)")
    return EXIT_NUMERICAL if failures else EXIT_OK


# ~~~~~~~~~
#  Parser
# ~~~~~~~~~


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gaussmet", description="Phase-averaged QFI for squeezing estimation with Gaussian probes.")
    parser.add_argument("--version", action="version", version=f"gaussmet {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", default="-", help="output CSV path ('-' for stdout)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--nodes", type=_nodes, default=DEFAULT_NODES, help="phase quadrature nodes")
    common.add_argument("--delta", type=_delta, default=DEFAULT_DELTA, help="finite-difference spacing")
    common.add_argument("--threads", type=_positive_int, default=None, help="worker threads (env GAUSSMET_THREADS)")
    common.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("bounds", parents=[common], help="closed-form bound curves versus n_A")
    p.add_argument("--n-max", type=_positive_float, default=2.0)
    p.add_argument("--points", type=int, default=101)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("sweep", parents=[common], help="random-state scatter dataset")
    p.add_argument("--family", choices=FAMILIES, default="general-1mode")
    p.add_argument("--count", type=_count, default=1000)
    for name, default in (("a-max", 9.0), ("g-max", 9.0), ("c-max", 9.0), ("r-max", 4.0), ("r-sq-max", 1.5), ("n-max", 4.0)):
        p.add_argument(f"--{name}", type=float, default=default)
    p.add_argument("--dump-states", metavar="PATH", help="also write the sampled states, one per line")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("qfi", parents=[common], help="average QFI of the states in a file")
    p.add_argument("state_file")
    p.add_argument("--max-nodes", type=_nodes, default=None, help="double the phase grid up to this until converged")
    p.set_defaults(func=cmd_qfi)

    p = sub.add_parser("classical", parents=[common], help="Monte-Carlo MLE versus the Cramer-Rao bound")
    p.add_argument("--sigma", type=_positive_float, default=1.0)
    p.add_argument("--theta", type=float, default=0.0)
    p.add_argument("--n-samples", type=_positive_int, default=10_000)
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--blocks", type=_positive_int, default=10)
    p.set_defaults(func=cmd_classical)

    p = sub.add_parser("verify", parents=[common], help="cross-check against the Fock-space oracle")
    p.add_argument("--level", choices=("quick", "full"), default="quick")
    p.add_argument("--dim", type=_positive_int, default=60, help="Fock truncation per mode")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "bounds" and args.points < 2:
            parser.error("--points must be at least 2")
    except SystemExit as exc:
        return exc.code
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"gaussmet: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except StateParseError as exc:
        print(f"gaussmet: {args.state_file}: {exc}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"gaussmet: {exc}", file=sys.stderr)
        return EXIT_IO
    except InvalidInputError as exc:
        print(f"gaussmet: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NumericalError, GaussmetError) as exc:
        print(f"gaussmet: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
