"""``lase-kk`` command line: laser-profile, probe-spectrum, kk-check, oracle-compare.

Exit codes: 0 success, 2 validation failure, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import config as cf
from .errors import LaseKKError
from .io import read_csv, write_csv, write_svg
from .kk import SampledSpectrum, kk_check
from .laser_clamp import NoLasing, detect_kinks, lasing_band, sample_profile
from .pump_probe import (
    PumpProbeParams,
    chi2_extrema,
    effective_rabi,
    probe_chi_closed,
    probe_chi_linear,
    probe_chi_solve,
    probe_chi_timedomain,
    response_poles,
    spectrum_sweep,
)

RAD = "rad_per_s"
DIM = "dimensionless"

CLOSED_SOLVE_TOL = 1e-10
SOLVE_TD_TOL = 1e-3
LINEAR_TOL = 1e-6
TD_STEP_BUDGET = 200_000
TD_STEP_BUDGET_RANDOM = 50_000


def _out_path(args, default_name):
    if args.out:
        path = Path(args.out)
    else:
        path = Path(os.environ.get("LASE_KK_OUT_DIR", ".")) / default_name
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


def _sibling(path, suffix):
    return path.with_name(path.stem + suffix)


def _load_cfg(args):
    file_cfg = cf.parse_config(Path(args.config).read_text()) if args.config else {}
    overrides = {
        "gamma": args.gamma, "gamma_ba": args.gamma_ba, "r_op": args.r_op,
        "delta_pump": args.delta_pump, "omega1": args.omega1, "q": args.q,
        "gq": args.gq, "nu0": args.nu0, "gain_g": args.gain_g,
        "grid_min": args.grid_min, "grid_max": args.grid_max, "grid_n": args.grid_n,
        "kk_window": args.kk_window, "seed": args.seed,
    }
    cfg = cf.merge(args.preset, file_cfg, overrides)
    if args.dump_config:
        Path(args.dump_config).write_text(cf.dump_config(cfg))
    return cfg


def _grid(cfg, purpose):
    lo, hi, n = cf.grid_spec(cfg, purpose)
    return np.linspace(lo, hi, n)


def cmd_laser_profile(args):
    cfg = _load_cfg(args)
    if cf.kind_of(cfg) != "laser":
        raise cf.ConfigError("laser-profile needs a laser preset (fig1) or q/gq/nu0")
    m, c = cf.laser_params(cfg)
    x = _grid(cfg, "spectrum")
    prof = sample_profile(m, c, x)
    out = _out_path(args, f"laser_profile_{cfg.get('preset', 'custom')}.csv")
    write_csv(out, [("detuning", RAD, x), ("chi_prime", DIM, prof.chi_prime),
                    ("chi_double_prime", DIM, prof.chi_double_prime),
                    ("omega_sq", "rad2_per_s2", prof.omega_sq)])
    kinks = [("chi_prime", k) for k in detect_kinks(prof, "chi_prime")]
    kinks += [("chi_double_prime", k) for k in detect_kinks(prof, "chi_double_prime")]
    kout = _sibling(out, "_kinks.csv")
    with open(kout, "w", newline="\n") as fh:
        fh.write(f"component,detuning[{RAD}]\n")
        for comp, k in kinks:
            fh.write(f"{comp},{k!r}\n")
    band = lasing_band(m, c)
    if isinstance(band, NoLasing):
        print(f"lasing: none (QG={band.qg!r} <= 1); kinks: {len(kinks)}")
    else:
        print(f"lasing: half_width={band.half_width!r} {RAD}; kinks: {len(kinks)}")
    if args.svg:
        write_svg(_sibling(out, ".svg") if not str(args.svg).endswith(".svg") else args.svg, [
            ("chi'", x, [(prof.chi_prime, False)]),
            ("-chi''", x, [(-prof.chi_double_prime, False)]),
            ("Omega^2", x, [(prof.omega_sq, False)]),
        ])
    return 0


def cmd_probe_spectrum(args):
    cfg = _load_cfg(args)
    if cf.kind_of(cfg) != "probe":
        raise cf.ConfigError("probe-spectrum needs a fig4 preset or pump-probe parameters")
    p = cf.probe_params(cfg)
    x = _grid(cfg, "spectrum")
    spec = spectrum_sweep(p, x)
    cols = [("delta", RAD, x), ("chi_prime", DIM, spec.chi_prime),
            ("chi_double_prime", DIM, spec.chi_double_prime)]
    worst = None
    if args.oracles:
        chi_s, _ = probe_chi_solve(p, x)
        dev = np.abs(spec.chi - chi_s) / np.abs(chi_s)
        worst = float(dev.max())
        cols += [("chi_prime_solve", DIM, chi_s.real), ("chi_double_prime_solve", DIM, chi_s.imag),
                 ("rel_dev_closed_solve", DIM, dev)]
    out = _out_path(args, f"probe_spectrum_{cfg.get('preset', 'custom')}.csv")
    write_csv(out, cols)
    poles = response_poles(p)
    pos, val = chi2_extrema(spec)
    print(f"effective_rabi={effective_rabi(p)!r} {RAD}; stable={poles.stable}")
    print("chi2_extrema=" + ";".join(f"{float(a)!r}:{float(b)!r}" for a, b in zip(pos, val)))
    if worst is not None:
        print(f"max_rel_dev_closed_solve={worst!r}")
    if args.svg:
        write_svg(_sibling(out, ".svg"), [
            ("chi'' (solid), chi' (dashed)", x,
             [(spec.chi_double_prime, False), (spec.chi_prime, True)]),
        ])
    if worst is not None and worst > CLOSED_SOLVE_TOL:
        return 3
    return 0


def cmd_kk_check(args):
    if args.input:
        cols = read_csv(args.input)
        names = list(cols)
        try:
            spec = SampledSpectrum(cols[names[0]], cols["chi_prime"], cols["chi_double_prime"])
        except KeyError:
            raise cf.ConfigError("input CSV needs chi_prime and chi_double_prime columns")
        label = Path(args.input).stem
    else:
        cfg = _load_cfg(args)
        x = _grid(cfg, "kk")
        if cf.kind_of(cfg) == "laser":
            m, c = cf.laser_params(cfg)
            prof = sample_profile(m, c, x)
            spec = SampledSpectrum(x, prof.chi_prime, prof.chi_double_prime)
        else:
            spec = spectrum_sweep(cf.probe_params(cfg), x)
        label = cfg.get("preset", "custom")
    rep = kk_check(spec)
    out = _out_path(args, f"kk_check_{label}.csv")
    write_csv(out, [("grid", RAD, rep.grid),
                    ("chi_prime", DIM, rep.chi_prime),
                    ("chi_prime_kk", DIM, rep.chi_prime_kk),
                    ("residual_forward", DIM, rep.residual_forward),
                    ("chi_double_prime", DIM, rep.chi_double_prime),
                    ("chi_double_prime_kk", DIM, rep.chi_double_prime_kk),
                    ("residual_backward", DIM, rep.residual_backward)])
    arg = int(np.nanargmax(np.abs(rep.residual_forward)))
    print(f"rel_l2_forward={rep.rel_l2_forward!r} rel_l2_backward={rep.rel_l2_backward!r} "
          f"residual_argmax={float(rep.grid[arg])!r}")
    return 0


def _td_steps(p, delta, n_settle=30, n_project=16):
    fastest = max(p.eta, p.theta, effective_rabi(p), abs(delta), abs(p.delta_pump + delta))
    dt = 0.04 / fastest
    t = n_settle / min(p.theta, p.eta)
    t += n_project * 2 * math.pi / abs(delta) if delta else n_project / min(p.theta, p.eta)
    return t / dt


def _random_params(rng, n):
    draws = []
    for _ in range(n):
        gam, gba, rop, dmag = 10 ** rng.uniform(5, 9, size=4)
        dsign = rng.choice([-1.0, 1.0])
        eta = gba + 0.5 * rop
        w1 = rng.uniform(0, 10 * eta)
        draws.append(PumpProbeParams(gam, gba, rop, dsign * dmag, w1))
    return draws


def cmd_oracle_compare(args):
    n_delta = args.deltas
    if args.random:
        rng = np.random.default_rng(args.seed if args.seed is not None else 0)
        draws = [(f"draw{k}", p) for k, p in enumerate(_random_params(rng, args.random))]
        deltas = {}
        for name, p in draws:
            span = 10 * max(effective_rabi(p), p.eta)
            deltas[name] = rng.uniform(-span, span, size=n_delta)
    else:
        cfg = _load_cfg(args)
        p = cf.probe_params(cfg)
        name = cfg.get("preset", "custom")
        draws = [(name, p)]
        span = 3 * (effective_rabi(p) or p.eta)
        deltas = {name: np.linspace(-span, span, n_delta)}
    per_case = args.td_per_case
    if per_case is None:
        per_case = 2 if args.random else n_delta
    budget = args.td_budget
    if budget is None:
        budget = TD_STEP_BUDGET_RANDOM if args.random else TD_STEP_BUDGET
    rows, failed = [], False
    worst_cs = worst_st = worst_lin = 0.0
    for name, p in draws:
        poles = response_poles(p)
        ds = deltas[name]
        closed = probe_chi_closed(p, ds)
        solve, _ = probe_chi_solve(p, ds)
        lin = probe_chi_linear(p, ds) if p.omega1 == 0 else None
        cost = np.array([_td_steps(p, d) for d in ds])
        run_td = set(int(i) for i in np.argsort(cost, kind="stable")[:per_case]
                     if cost[i] <= budget)
        for i, d in enumerate(ds):
            dev_cs = abs(closed[i] - solve[i]) / abs(solve[i])
            status, td, dev_st = "ok", complex("nan"), float("nan")
            if d == 0 and p.omega1 > 0 or i not in run_td:
                status = "td_skipped"
            else:
                try:
                    td = probe_chi_timedomain(p, d)
                    dev_st = abs(solve[i] - td) / abs(solve[i])
                except LaseKKError as exc:
                    status = f"nonconvergence: {exc}".replace(",", ";")
            dev_lin = (max(abs(x - lin[i]) for x in (closed[i], solve[i]) + (
                (td,) if status == "ok" else ())) / abs(lin[i])) if lin is not None else float("nan")
            if poles.stable:
                worst_cs = max(worst_cs, dev_cs)
                if status == "ok":
                    worst_st = max(worst_st, dev_st)
                if lin is not None:
                    worst_lin = max(worst_lin, dev_lin)
                bad = (dev_cs > CLOSED_SOLVE_TOL or (status == "ok" and dev_st > SOLVE_TD_TOL)
                       or (lin is not None and dev_lin > LINEAR_TOL))
                failed |= bad
            rows.append((name, d, closed[i], solve[i], td, dev_cs, dev_st, dev_lin,
                         poles.stable, status))
    out = _out_path(args, "oracle_compare.csv")
    with open(out, "w", newline="\n") as fh:
        fh.write(f"case,delta[{RAD}],chi_closed_re[{DIM}],chi_closed_im[{DIM}],"
                 f"chi_solve_re[{DIM}],chi_solve_im[{DIM}],chi_td_re[{DIM}],chi_td_im[{DIM}],"
                 f"dev_closed_solve[{DIM}],dev_solve_td[{DIM}],dev_linear[{DIM}],stable,status\n")
        for (name, d, c, s, t, a, b, l, st, status) in rows:
            vals = [d, c.real, c.imag, s.real, s.imag, t.real, t.imag, a, b, l]
            fh.write(",".join([name] + [repr(float(v)) for v in vals] + [str(st), status]) + "\n")
    print(f"cases={len(draws)} max_dev_closed_solve={float(worst_cs)!r} "
          f"max_dev_solve_td={float(worst_st)!r} max_dev_linear={float(worst_lin)!r} "
          f"verdict={'FAIL' if failed else 'PASS'}")
    return 3 if failed else 0


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--preset", choices=sorted(cf.PRESETS))
    common.add_argument("--config", help="flat key = value file")
    common.add_argument("--dump-config", help="write the merged effective config here")
    common.add_argument("--out")
    common.add_argument("--svg", action="store_true")
    common.add_argument("--grid-min", type=float)
    common.add_argument("--grid-max", type=float)
    common.add_argument("--grid-n", type=int)
    common.add_argument("--seed", type=int)
    common.add_argument("--kk-window", type=float, help="KK half-window in units of eta")
    for flag in ("gamma", "gamma-ba", "r-op", "delta-pump", "omega1", "q", "gq",
                 "nu0", "gain-g"):
        common.add_argument(f"--{flag}", type=float)

    parser = argparse.ArgumentParser(prog="lase-kk", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("laser-profile", parents=[common]).set_defaults(func=cmd_laser_profile)
    ps = sub.add_parser("probe-spectrum", parents=[common])
    ps.add_argument("--oracles", action="store_true")
    ps.set_defaults(func=cmd_probe_spectrum)
    kk = sub.add_parser("kk-check", parents=[common])
    kk.add_argument("--input", help="CSV with chi_prime and chi_double_prime columns")
    kk.set_defaults(func=cmd_kk_check)
    oc = sub.add_parser("oracle-compare", parents=[common])
    oc.add_argument("--deltas", type=int, default=32)
    oc.add_argument("--random", type=int, default=0)
    oc.add_argument("--td-budget", type=float,
                    help="skip time-domain runs needing more RK4 steps than this")
    oc.add_argument("--td-per-case", type=int,
                    help="time-domain runs per case (default: all for presets, 2 for --random)")
    oc.set_defaults(func=cmd_oracle_compare)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except LaseKKError as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
