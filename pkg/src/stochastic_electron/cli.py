"""Command-line experiment runner.

    stochastic-electron zpf | cloud | simulate | variational | angular | report

Every subcommand writes one RunReport (JSON) or its table (CSV) to standard
output or ``--out``. Exit codes: 0 all checks pass, 1 a check failed (report
still written), 2 bad arguments, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import datetime as _dt
import math
import os
import sys

import numpy as np

from . import charge_cloud as cc
from .kinematics import (
    BudgetExceededError,
    StepSizeError,
    estimate_velocities_from_paths,
    harmonic_ground,
    hydrogen_1s,
    plane_wave,
    simulate_ensemble,
)
from .numerics import BracketError, QuadratureError, QuadratureSpec, ks_statistic
from .report import (
    FAIL,
    KS_THRESHOLD,
    Table,
    build_report,
    check_below,
    dumps,
    ks_min_paths,
    quantity,
    skipped,
    suite_checks,
    table_to_csv,
)
from .uncertainty import PRINTED_RADIUS_NOTE, l_square_report, minimize_energy
from .units import atomic_units
from .vacuum import SpectralCutoffs, zpf_report

SEED_ENV = "STOCHASTIC_ELECTRON_SEED"

EXIT_OK, EXIT_CHECK_FAILED, EXIT_USAGE, EXIT_NUMERICAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _nonnegative_int(text):
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {value}")
    return value


def _positive_float(text):
    value = float(text)
    if not (math.isfinite(value) and value > 0):
        raise argparse.ArgumentTypeError(f"must be a finite number > 0, got {text}")
    return value


def _nonnegative_float(text):
    value = float(text)
    if not (math.isfinite(value) and value >= 0):
        raise argparse.ArgumentTypeError(f"must be a finite number >= 0, got {text}")
    return value


def _charge(text):
    value = float(text)
    if not (math.isfinite(value) and 1 <= value <= 137):
        raise argparse.ArgumentTypeError(f"Z must lie in [1, 137], got {text}")
    return value


def _default_seed():
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise SystemExit(f"error: {SEED_ENV} must be an integer, got {raw!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="stochastic-electron", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--out", default="-", help="output path ('-' for standard output)")
    common.add_argument("--timestamp", action=argparse.BooleanOptionalAction, default=False,
                        help="add a generated_at field (off by default so output is reproducible)")
    common.add_argument("--abs-tol", type=_positive_float, default=1e-13)
    common.add_argument("--rel-tol", type=_positive_float, default=1e-12)
    common.add_argument("--max-depth", type=_positive_int, default=40)

    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("zpf", parents=[common], help="vacuum kinetic energy")
    p.add_argument("--omega-min", type=_nonnegative_float, default=None)
    p.add_argument("--omega-max", type=_nonnegative_float, default=None)

    p = sub.add_parser("cloud", parents=[common], help="charge cloud potential and self-energy")
    p.add_argument("--points", type=_positive_int, default=200)

    p = sub.add_parser("simulate", parents=[common], help="trembling-motion ensemble")
    p.add_argument("--state", choices=("hydrogen", "harmonic", "harmonic3d", "plane-wave"), default="hydrogen")
    p.add_argument("--Z", dest="z", type=_charge, default=1.0)
    p.add_argument("--omega", type=_positive_float, default=1.0)
    p.add_argument("--k", type=float, default=1.0)
    p.add_argument("--paths", type=_positive_int, default=20000)
    p.add_argument("--steps", type=_nonnegative_int, default=100)
    p.add_argument("--dt", type=_positive_float, default=1e-3)
    p.add_argument("--burn-in", type=_nonnegative_int, default=1000)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--bins", type=_positive_int, default=40)
    p.add_argument("--diffusion-scale", type=_nonnegative_float, default=1.0)
    p.add_argument("--workers", type=_positive_int, default=1)

    p = sub.add_parser("variational", parents=[common], help="uncertainty-relation ground states")
    p.add_argument("--Z", dest="z", type=_charge, default=1.0)
    p.add_argument("--Z-max", dest="z_max", type=_positive_int, default=None)

    p = sub.add_parser("angular", parents=[common], help="angular-momentum dispersion table")
    p.add_argument("--l", type=_nonnegative_int, default=1)
    p.add_argument("--l-max", dest="l_max", type=_nonnegative_int, default=None)

    p = sub.add_parser("report", parents=[common], help="run the full check suite")
    p.add_argument("--paths", type=_positive_int, default=20000)
    p.add_argument("--dt", type=_positive_float, default=1e-3)
    p.add_argument("--burn-in", type=_nonnegative_int, default=1000)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--workers", type=_positive_int, default=1)
    return parser


def _spec(args):
    return QuadratureSpec(abs_tol=args.abs_tol, rel_tol=args.rel_tol, max_depth=args.max_depth)


def run_zpf(args):
    u = atomic_units()
    default = SpectralCutoffs.default(u)
    try:
        cutoffs = SpectralCutoffs(
            default.omega_min if args.omega_min is None else args.omega_min,
            default.omega_max if args.omega_max is None else args.omega_max,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    z = zpf_report(u, cutoffs, _spec(args))
    results = {
        "e_kinetic": quantity(z.e_kinetic, "hartree"),
        "closed_form": quantity(z.closed_form, "hartree"),
        "rel_deviation": quantity(z.rel_deviation, "dimensionless"),
        "ratio_to_rest_energy": quantity(z.ratio_to_rest_energy, "dimensionless"),
        "omega_min": quantity(cutoffs.omega_min, "1/atomic_time"),
        "omega_max": quantity(cutoffs.omega_max, "1/atomic_time"),
    }
    checks = []
    if cutoffs == default:
        checks.append(check_below("zpf_closed_form", z.rel_deviation, 1e-10))
    table = Table(
        ["omega_min_per_atomic_time", "omega_max_per_atomic_time", "e_kinetic_hartree",
         "closed_form_hartree", "rel_deviation"],
        [[cutoffs.omega_min, cutoffs.omega_max, z.e_kinetic, z.closed_form, z.rel_deviation]],
    )
    return results, checks, table


def run_cloud(args):
    cloud = cc.GaussianCloud.from_units()
    spec = _spec(args)
    grid = cc.log_grid(cloud, n=args.points)
    poisson = cc.self_potential_via_poisson(cloud, grid, spec)
    erf_form = np.array([cc.self_potential(cloud, r) for r in grid])
    density = cc.charge_density(cloud, grid)
    amp2 = cc.oscillator_ground_amplitude(cloud, grid) ** 2
    e_nested = cc.self_energy(cloud, spec)
    e_closed = cc.self_energy_closed(cloud)
    budget = cc.energy_budget_compare()

    overlap = (grid >= 0.1 * cloud.lambda_o) & (grid <= 10 * cloud.lambda_o)
    far = grid >= 10 * cloud.lambda_o
    checks = [
        check_below("born_identity", float(np.max(np.abs(amp2 / density - 1))), 1e-12),
        check_below("potential_dual_route", float(np.max(np.abs(poisson.values[overlap] / erf_form[overlap] - 1))), 1e-6),
        check_below("far_field_charge", float(np.max(np.abs(grid[far] * poisson.values[far] + cloud.total_charge))), 1e-10),
        check_below("self_energy_closed_form", abs(e_nested / e_closed - 1), 1e-8),
        check_below("budget_ratio", abs(budget.ratio - math.sqrt(math.pi / 3)), 1e-9),
    ]
    results = {
        "lambda_o": quantity(cloud.lambda_o, "bohr"),
        "self_energy_nested": quantity(e_nested, "hartree"),
        "self_energy_closed": quantity(e_closed, "hartree"),
        "energy_budget": {
            "e_kinetic": quantity(budget.e_kinetic, "hartree"),
            "e_potential": quantity(budget.e_potential, "hartree"),
            "ratio": quantity(budget.ratio, "dimensionless"),
            "rel_difference": quantity(budget.rel_difference, "dimensionless"),
        },
    }
    table = Table(
        ["radius_bohr", "density_per_bohr3", "amplitude_squared_per_bohr3",
         "potential_erf_hartree_per_e", "potential_poisson_hartree_per_e"],
        [list(row) for row in zip(grid, density, amp2, erf_form, poisson.values)],
    )
    return results, checks, table


def _make_state(args):
    if args.state == "hydrogen":
        return hydrogen_1s(args.z)
    if args.state == "harmonic":
        return harmonic_ground(args.omega, 1)
    if args.state == "harmonic3d":
        return harmonic_ground(args.omega, 3)
    return plane_wave(args.k)


def run_simulate(args):
    state = _make_state(args)
    try:
        ens = simulate_ensemble(state, args.paths, args.steps, args.dt, args.burn_in, args.seed,
                                diffusion_scale=args.diffusion_scale, workers=args.workers)
    except (StepSizeError, BudgetExceededError) as exc:
        raise UsageError(str(exc)) from None

    final = ens.positions[:, -1, :]
    radii = np.linalg.norm(final, axis=-1)
    results = {
        "state": state.kind,
        "n_paths": ens.n_paths,
        "n_records": ens.n_records,
        "diffusion": quantity(ens.diffusion, "bohr^2/atomic_time"),
        "final_time": quantity(float(ens.record_times[-1]), "atomic_time"),
        "mean_radius": quantity(float(np.mean(radii)), "bohr"),
        "mean_position": quantity(final.mean(axis=0).tolist(), "bohr"),
        "mean_square_radius": quantity(float(np.mean(radii**2)), "bohr^2"),
    }
    checks = []
    if state.normalizable:
        ks = ks_statistic(np.sort(radii), state.radial_cdf)
        results["ks_final"] = quantity(ks, "dimensionless")
        if args.paths < ks_min_paths():
            checks.append(skipped("born_ks", KS_THRESHOLD))
        else:
            checks.append(check_below("born_ks", ks, KS_THRESHOLD))

    table = Table(["bin_center_bohr", "bin_mean_bohr", "count", "v_plus_bohr_per_atomic_time",
                   "v_minus_bohr_per_atomic_time", "current_bohr_per_atomic_time",
                   "osmotic_drift_bohr_per_atomic_time", "current_se", "osmotic_se"])
    if ens.n_records >= 3:
        if state.normalizable:
            half = 4.0 * state.length_scale
            edges = np.linspace(-half, half, args.bins + 1)
        else:
            x = ens.positions[:, :, 0]
            lo, hi = float(x.min()), float(x.max())
            if hi <= lo:
                hi = lo + 1.0
            edges = np.linspace(lo, hi + 1e-12 * max(1.0, abs(hi)), args.bins + 1)
        est = estimate_velocities_from_paths(ens, edges)
        for row in zip(est.bin_centers, est.bin_means, est.counts, est.v_plus, est.v_minus,
                       est.current_est, est.osmotic_est, est.std_errors["current"], est.std_errors["osmotic"]):
            table.rows.append(list(row))
    return results, checks, table


def run_variational(args):
    zs = list(range(1, args.z_max + 1)) if args.z_max else [args.z]
    rows = []
    checks = []
    entries = []
    for z in zs:
        v = minimize_energy(z)
        rows.append([z, v.r_opt, v.e_opt, v.numeric_r_opt, v.numeric_e_opt, v.p_r_dispersion,
                     v.l_dispersion_sum, v.printed_r_opt])
        entries.append({
            "z": z,
            "r_opt": quantity(v.r_opt, "bohr"),
            "e_opt": quantity(v.e_opt, "hartree"),
            "numeric_r_opt": quantity(v.numeric_r_opt, "bohr"),
            "numeric_e_opt": quantity(v.numeric_e_opt, "hartree"),
            "p_r_dispersion": quantity(v.p_r_dispersion, "hbar^2/bohr^2"),
            "l_dispersion_sum": quantity(v.l_dispersion_sum, "hbar^2"),
            "printed_r_opt": quantity(v.printed_r_opt, "bohr"),
        })
        checks.append(check_below(f"minimizer_agreement_Z{z:g}", abs(v.numeric_r_opt - v.r_opt), 1e-9))
    results = entries[0] if len(entries) == 1 else {"table": entries}
    results["note"] = PRINTED_RADIUS_NOTE
    table = Table(["z", "r_opt_bohr", "e_opt_hartree", "numeric_r_opt_bohr", "numeric_e_opt_hartree",
                   "p_r_dispersion_hbar2_per_bohr2", "l_dispersion_sum_hbar2", "printed_r_opt_bohr"], rows)
    return results, checks, table


def run_angular(args):
    ls = list(range(0, args.l_max + 1)) if args.l_max is not None else [args.l]
    rows = []
    entries = []
    checks = []
    for l in ls:
        rep = l_square_report(l)
        rows.append([l, rep.branch, rep.lz_mean, rep.dx2, rep.dy2, rep.dz2, rep.l_square_paper,
                     rep.l_square_closed, rep.l_square_standard, *rep.inequalities_satisfied,
                     *rep.saturated])
        entries.append({
            "l": l,
            "branch": rep.branch,
            "lz_mean": quantity(rep.lz_mean, "hbar"),
            "dispersions": quantity([rep.dx2, rep.dy2, rep.dz2], "hbar^2"),
            "l_square_paper": quantity(rep.l_square_paper, "hbar^2"),
            "l_square_closed": quantity(rep.l_square_closed, "hbar^2"),
            "l_square_standard": quantity(rep.l_square_standard, "hbar^2"),
            "inequalities_satisfied": list(rep.inequalities_satisfied),
            "saturated": list(rep.saturated),
            "literal_cyclic_satisfied": list(rep.literal_cyclic_satisfied),
        })
        if l >= 1:
            checks.append(check_below(f"l_square_closed_l{l}", abs(rep.l_square_paper - rep.l_square_closed), 1e-14))
    results = entries[0] if len(entries) == 1 else {"table": entries}
    table = Table(["l", "branch", "lz_mean_hbar", "dx2_hbar2", "dy2_hbar2", "dz2_hbar2",
                   "l_square_paper_hbar2", "l_square_closed_hbar2", "l_square_standard_hbar2",
                   "xy_relation_holds", "yz_relation_holds", "zx_relation_holds",
                   "xy_saturated", "yz_saturated", "zx_saturated"], rows)
    return results, checks, table


def run_report(args):
    results, checks = suite_checks(paths=args.paths, seed=args.seed, dt=args.dt,
                                   burn_in=args.burn_in, workers=args.workers)
    table = Table(["name", "status", "measured", "threshold", "detail"],
                  [[c.name, c.status, c.measured, c.threshold, c.detail] for c in checks])
    return results, checks, table


RUNNERS = {
    "zpf": run_zpf,
    "cloud": run_cloud,
    "simulate": run_simulate,
    "variational": run_variational,
    "angular": run_angular,
    "report": run_report,
}


#: Flags that change how a run executes but not what it computes.
_NOT_ECHOED = ("out", "timestamp", "workers")


def _config_echo(args):
    return {key: value for key, value in sorted(vars(args).items()) if key not in _NOT_ECHOED}


def _write(text, out):
    if out == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    if hasattr(args, "seed") and args.seed is None:
        args.seed = _default_seed()

    try:
        results, checks, table = RUNNERS[args.subcommand](args)
    except (UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (QuadratureError, BracketError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL

    timestamp = _dt.datetime.now(_dt.timezone.utc).isoformat() if args.timestamp else None
    if args.format == "json":
        text = dumps(build_report(_config_echo(args), results, checks, table, timestamp))
    else:
        text = table_to_csv(table)
    _write(text, args.out)
    return EXIT_CHECK_FAILED if any(c.status == FAIL for c in checks) else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
