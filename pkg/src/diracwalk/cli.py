"""Command-line front end: run any computation route and emit CSV datasets.

Output format: '#'-prefixed header lines echo the tool version and the
scientific configuration, data rows use the shortest round-trip decimal
form of each float, newlines are LF.  Identical configuration and seed
produce byte-identical files, whatever the worker count (set NDW_THREADS
to parallelize the ensemble subcommands).
"""

import argparse
import math
import sys
from contextlib import nullcontext

import numpy as np

from . import __version__, closedform, dirac, moments, montecarlo, physical, walk

DEFAULT_SEED = 137

PRESETS = {
    "fig1": {"command": "evolve", "epsilon": 0.2, "steps": [20, 50, 100, 200]},
    "fig2": {"command": "peak", "epsilon": 0.2, "steps": [200]},
    "fig3": {"command": "moments", "epsilon": 0.2, "steps": [1000]},
    "fig4": {"command": "gaussian", "epsilon": 0.2, "steps": [100, 300]},
}


def _fmt(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))  # shortest round-trip decimal form
    return str(value)


def write_csv(out, meta, columns, rows, footers=()):
    """Write a commented-header CSV; ``out`` is a path or '-' for stdout."""
    lines = [f"# diracwalk {__version__}"]
    lines += [f"# {key}: {_fmt(val)}" for key, val in meta]
    lines.append("# columns: " + ",".join(columns))
    lines += [",".join(_fmt(v) for v in row) for row in rows]
    lines += [f"# {key}: {_fmt(val)}" for key, val in footers]
    text = "\n".join(lines) + "\n"
    if out == "-":
        ctx = nullcontext(sys.stdout)
    else:
        ctx = open(out, "w", newline="\n")
    with ctx as fh:
        fh.write(text)


def _steps_list(text: str) -> list[int]:
    try:
        values = [int(part) for part in text.split(",") if part.strip() != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad step list {text!r}")
    if not values or any(v < 0 for v in values):
        raise argparse.ArgumentTypeError(f"steps must be non-negative integers, got {text!r}")
    return values


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {text}")
    return value


def _float_list(text: str) -> list[float]:
    try:
        values = [float(part) for part in text.split(",") if part.strip() != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad float list {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("empty list")
    return values


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="diracwalk",
        description="Noisy-quantum-walk model of a massless Dirac particle in a "
        "randomly flipping magnetic field: CSV datasets from every computation route.",
    )
    parser.add_argument("--version", action="version", version=f"diracwalk {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--epsilon", type=float, help="noise strength (dimensionless route)")
    common.add_argument("--c", type=float, default=None, help="speed of light, m/s")
    common.add_argument("--hbar", type=float, default=None, help="reduced Planck constant, J*s")
    common.add_argument("--mu", type=float, default=None, help="magnetic moment, rad/(s*T)")
    common.add_argument("--b0", type=float, default=None, help="field strength, tesla")
    common.add_argument("--delta", type=float, default=None, help="field-flip interval, s")
    common.add_argument("--mass", type=float, default=None, help="rest mass, kg (default 0)")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED, help="master RNG seed")
    common.add_argument("--out", default="-", help="output CSV path ('-' for stdout)")
    common.add_argument("--preset", choices=sorted(PRESETS), help="named figure dataset")

    sp = sub.add_parser("evolve", parents=[common], help="site distributions at given steps")
    sp.add_argument("--steps", type=_steps_list, default=[50], help="comma-separated step counts")

    sp = sub.add_parser("peak", parents=[common], help="stay-on-the-light-cone probability decay")
    sp.add_argument("--steps", type=_steps_list, default=[200], help="largest step count")

    sp = sub.add_parser("moments", parents=[common], help="moment growth and regime crossover")
    sp.add_argument("--steps", type=_steps_list, default=[1000], help="largest step count")

    sp = sub.add_parser("gaussian", parents=[common], help="distribution vs its normal limit")
    sp.add_argument(
        "--steps", type=_steps_list, default=[100, 300], help="comma-separated step counts"
    )

    sp = sub.add_parser("mc", parents=[common], help="Monte Carlo vs recurrence residuals")
    sp.add_argument("--steps", type=_steps_list, default=[100], help="step count")
    sp.add_argument("--realizations", type=_positive_int, default=10000)

    sp = sub.add_parser("dirac", parents=[common], help="exact-vs-factored step TV sweep")
    sp.add_argument("--steps", type=_steps_list, default=[40], help="step count")
    sp.add_argument("--realizations", type=_positive_int, default=400)
    sp.add_argument(
        "--phis",
        type=_float_list,
        default=[0.2, 0.1, 0.05],
        help="comma-separated coin angles to sweep",
    )

    sp = sub.add_parser("validate", parents=[common], help="approximation validity report")
    sp.add_argument(
        "--p-expectation", type=float, default=0.0, help="momentum scale <p>, kg*m/s"
    )

    sp = sub.add_parser("compare", parents=[common], help="recurrence vs closed form (vs MC)")
    sp.add_argument("--steps", type=_steps_list, default=[40], help="step count")
    sp.add_argument("--realizations", type=_positive_int, default=None)

    return parser


def _apply_preset(args) -> None:
    if not getattr(args, "preset", None):
        return
    preset = PRESETS[args.preset]
    if preset["command"] != args.command:
        raise ValueError(
            f"preset {args.preset!r} belongs to the {preset['command']!r} subcommand"
        )
    if args.epsilon is None:
        args.epsilon = preset["epsilon"]
    args.steps = preset["steps"]


def _physical_given(args) -> bool:
    return any(getattr(args, name) is not None for name in ("mu", "b0", "delta", "mass"))


def _build_physical(args) -> physical.PhysicalParams:
    missing = [name for name in ("mu", "b0", "delta") if getattr(args, name) is None]
    if missing:
        raise ValueError(f"physical route needs --mu --b0 --delta (missing: {', '.join(missing)})")
    return physical.PhysicalParams(
        c=args.c if args.c is not None else 1.0,
        hbar=args.hbar if args.hbar is not None else 1.0,
        mu=args.mu,
        b0=args.b0,
        delta=args.delta,
        mass=args.mass if args.mass is not None else 0.0,
    )


def _resolve_epsilon(args) -> tuple[float, list[tuple]]:
    """Exactly one of --epsilon or the physical flag set must be provided."""
    has_eps = args.epsilon is not None
    has_phys = _physical_given(args)
    if has_eps and has_phys:
        raise ValueError("give either --epsilon or physical flags, not both")
    if not has_eps and not has_phys:
        raise ValueError("give --epsilon (or a --preset), or the physical flags")
    if has_eps:
        return args.epsilon, [("epsilon", args.epsilon)]
    phys = _build_physical(args)
    eps = physical.derive_epsilon(phys)
    meta = [
        ("epsilon", eps),
        ("c", phys.c),
        ("hbar", phys.hbar),
        ("mu", phys.mu),
        ("b0", phys.b0),
        ("delta", phys.delta),
        ("mass", phys.mass),
    ]
    return eps, meta


def _noise_warning(epsilon: float) -> list[tuple]:
    if epsilon > 1.0:
        return [("warning", "epsilon > 1 is outside the weak-noise regime")]
    return []


def _snapshots(epsilon: float, wanted: list[int]):
    """States of the recurrence at the requested step counts."""
    params = walk.WalkParams(epsilon=epsilon, n_steps=max(wanted))
    want = set(wanted)
    for state in walk.evolution(params):
        if state.n in want:
            yield state


def cmd_evolve(args) -> int:
    eps, meta = _resolve_epsilon(args)
    meta = [("command", "evolve")] + meta + [("steps", ",".join(map(str, args.steps)))]
    meta += _noise_warning(eps)
    rows = []
    for state in _snapshots(eps, args.steps):
        peak = closedform.ballistic_peak(state.n, eps)
        for k, a, b in zip(state.sites, state.alpha, state.beta):
            rows.append((state.n, int(k), a, b, a + b, peak))
    write_csv(args.out, meta, ["n", "k", "alpha", "beta", "p", "ballistic_peak"], rows)
    return 0


def cmd_peak(args) -> int:
    eps, meta = _resolve_epsilon(args)
    n_max = max(args.steps)
    meta = [("command", "peak")] + meta + [("steps", n_max)] + _noise_warning(eps)
    rows = []
    params = walk.WalkParams(epsilon=eps, n_steps=n_max)
    for state in walk.evolution(params):
        p_nn = float(state.alpha[-1] + state.beta[-1])
        rows.append((state.n, p_nn, closedform.ballistic_peak(state.n, eps)))
    write_csv(args.out, meta, ["n", "p_nn", "p_nn_closed"], rows)
    return 0


def cmd_moments(args) -> int:
    eps, meta = _resolve_epsilon(args)
    n_max = max(args.steps)
    meta = [("command", "moments")] + meta + [("steps", n_max)] + _noise_warning(eps)
    rows = []
    params = walk.WalkParams(epsilon=eps, n_steps=n_max)
    for state in walk.evolution(params):
        if state.n == 0:
            continue
        dist = walk.distribution(state)
        emp = moments.empirical_moments(dist, 2)
        _, s1, s2 = moments.exact_moments(state.n, eps)
        ball, diff = moments.regime_expansions(state.n, eps) if eps > 0 else (state.n**2, math.inf)
        rows.append(
            (
                state.n,
                s1,
                s2,
                float(emp[2]),
                ball,
                diff,
                moments.classify_regime(state.n, eps),
            )
        )
    footers = []
    if 0.0 < eps < 1.0:
        footers.append(("crossover_n", moments.crossover(eps)))
    write_csv(
        args.out,
        meta,
        ["n", "s1_exact", "s2_exact", "s2_empirical", "ballistic_approx", "diffusive_approx", "regime"],
        rows,
        footers,
    )
    return 0


def cmd_gaussian(args) -> int:
    eps, meta = _resolve_epsilon(args)
    if eps <= 0.0:
        raise ValueError("the gaussian comparison needs epsilon > 0")
    meta = [("command", "gaussian")] + meta + [("steps", ",".join(map(str, args.steps)))]
    meta += _noise_warning(eps)
    rows = []
    footers = []
    for state in _snapshots(eps, args.steps):
        dist = walk.distribution(state)
        dens = moments.normal_density_lattice(state.n, eps, dist.sites)
        for k, pk, dk in zip(dist.sites, dist.p, dens):
            rows.append((state.n, int(k), 0.5 * pk, dk))
        footers.append((f"tv_n{state.n}", moments.gaussian_lattice_tv(dist, eps)))
    write_csv(args.out, meta, ["n", "k", "half_p", "normal_density"], rows, footers)
    return 0


def cmd_mc(args) -> int:
    eps, meta = _resolve_epsilon(args)
    n = max(args.steps)
    meta = [("command", "mc")] + meta
    meta += [("steps", n), ("realizations", args.realizations), ("seed", args.seed)]
    meta += _noise_warning(eps)
    params = walk.WalkParams(epsilon=eps, n_steps=n)
    est = montecarlo.run_ensemble(params, args.realizations, args.seed)
    state = walk.evolve(params)
    rows = []
    over = 0
    for i, k in enumerate(est.sites):
        ra = abs(est.mean_alpha[i] - state.alpha[i])
        rb = abs(est.mean_beta[i] - state.beta[i])
        if ra > max(4.0 * est.stderr_alpha[i], 1e-12) or rb > max(
            4.0 * est.stderr_beta[i], 1e-12
        ):
            over += 1
        rows.append(
            (
                int(k),
                est.mean_alpha[i],
                state.alpha[i],
                est.stderr_alpha[i],
                est.mean_beta[i],
                state.beta[i],
                est.stderr_beta[i],
            )
        )
    footers = [("sites_beyond_4se", over), ("site_count", len(est.sites))]
    write_csv(
        args.out,
        meta,
        ["k", "alpha_mc", "alpha_exact", "stderr_alpha", "beta_mc", "beta_exact", "stderr_beta"],
        rows,
        footers,
    )
    return 0


def cmd_dirac(args) -> int:
    if args.epsilon is not None or _physical_given(args):
        raise ValueError("the dirac sweep is parametrized by --phis, not epsilon")
    n = max(args.steps)
    grid = dirac.GridSpec.for_steps(n)
    meta = [
        ("command", "dirac"),
        ("steps", n),
        ("realizations", args.realizations),
        ("seed", args.seed),
        ("phis", ",".join(repr(v) for v in args.phis)),
        ("grid_extent", grid.extent),
        ("grid_points", grid.n_points),
    ]
    rows = []
    for phi in args.phis:
        rec = dirac.ensemble_compare(n, phi, args.realizations, args.seed, grid=grid)
        rows.append(
            (phi, rec.epsilon, rec.tv_exact_split, rec.tv_split_walk, rec.tv_exact_walk)
        )
    write_csv(
        args.out,
        meta,
        ["phi", "epsilon", "tv_exact_split", "tv_split_walk", "tv_exact_walk"],
        rows,
    )
    return 0


def cmd_validate(args) -> int:
    if args.epsilon is not None:
        raise ValueError("validate works on the physical flags, not --epsilon")
    phys = _build_physical(args)
    report = physical.check_validity(phys, args.p_expectation)
    meta = [
        ("command", "validate"),
        ("c", phys.c),
        ("hbar", phys.hbar),
        ("mu", phys.mu),
        ("b0", phys.b0),
        ("delta", phys.delta),
        ("mass", phys.mass),
        ("p_expectation", args.p_expectation),
    ]
    rows = [
        ("epsilon", report.epsilon, ""),
        ("coin_angle", report.coin_angle, ""),
        ("momentum_condition", report.momentum_condition, report.momentum_verdict),
        ("coin_condition", report.coin_condition, report.coin_verdict),
        ("mass_condition_ratio", report.mass_condition_ratio, report.mass_verdict),
    ]
    if report.epsilon > 0.0 and math.isfinite(report.epsilon):
        x0, diff = physical.diffusion_parameters(phys)
        rows.append(("x0", x0, ""))
        rows.append(("diffusion", diff, ""))
    write_csv(args.out, meta, ["quantity", "value", "verdict"], rows)
    return 0


def cmd_compare(args) -> int:
    eps, meta = _resolve_epsilon(args)
    n = max(args.steps)
    meta = [("command", "compare")] + meta + [("steps", n)]
    if args.realizations:
        meta += [("realizations", args.realizations), ("seed", args.seed)]
    meta += _noise_warning(eps)
    params = walk.WalkParams(epsilon=eps, n_steps=n)
    state = walk.evolve(params)
    est = (
        montecarlo.run_ensemble(params, args.realizations, args.seed)
        if args.realizations
        else None
    )
    columns = ["k", "p_recurrence", "p_closedform", "abs_diff"]
    if est is not None:
        columns += ["p_mc", "stderr_p"]
    rows = []
    max_diff = 0.0
    for i, k in enumerate(state.sites):
        p_rec = float(state.alpha[i] + state.beta[i])
        p_cf = closedform.p(n, int(k), eps)
        diff = abs(p_rec - p_cf)
        max_diff = max(max_diff, diff)
        row = [int(k), p_rec, p_cf, diff]
        if est is not None:
            row += [est.mean_p[i], est.stderr_p[i]]
        rows.append(tuple(row))
    write_csv(args.out, meta, columns, rows, [("max_abs_diff", max_diff)])
    return 0


_COMMANDS = {
    "evolve": cmd_evolve,
    "peak": cmd_peak,
    "moments": cmd_moments,
    "gaussian": cmd_gaussian,
    "mc": cmd_mc,
    "dirac": cmd_dirac,
    "validate": cmd_validate,
    "compare": cmd_compare,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        _apply_preset(args)
        return _COMMANDS[args.command](args)
    except (ValueError, ArithmeticError, OSError) as exc:
        print(f"diracwalk: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
