"""Command-line driver.

Subcommands:

* ``run <config>``: execute one sweep config, write CSV/JSON.
* ``preset <name>``: run a bundled figure preset (one output file per
  curve).
* ``selftest``: oracle-equivalence suite; closed forms must match their
  adaptive-quadrature twins, and the Monte Carlo gap is reported (it
  measures the Gaussian channel approximation, not the implementation,
  so it only fails the run under ``--strict-mc``).

Exit codes: 0 success, 1 configuration error, 2 numerical failure,
3 I/O error.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys

from .channel import SystemParams, derive_stats
from .montecarlo import McConfig, simulate_metrics
from .secrecy import (
    NumericsConfig,
    avg_secrecy_capacity,
    avg_secrecy_capacity_reference,
    sop,
    sop_reference,
)
from .specfun import ConvergenceError
from .sweeps import ConfigError, PRESET_NAMES, SweepSpec, emit, load_config, load_preset

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NUMERICAL = 2
EXIT_IO = 3


def _apply_overrides(spec: SweepSpec, args) -> SweepSpec:
    mc = spec.mc
    numerics = spec.numerics
    if args.trials is not None:
        mc = dataclasses.replace(mc, trials=args.trials)
    if args.seed is not None:
        mc = dataclasses.replace(mc, seed=args.seed)
    if args.quad_order is not None:
        numerics = dataclasses.replace(numerics, quad_order=args.quad_order)
    return dataclasses.replace(spec, mc=mc, numerics=numerics)


def _cmd_run(args) -> int:
    from .sweeps import run_sweep

    spec = _apply_overrides(load_config(args.config), args)
    table = run_sweep(spec)
    text = emit(table, args.format, args.out)
    if args.out is None:
        sys.stdout.write(text)
    else:
        print(f"wrote {args.out}")
    return EXIT_OK


def _cmd_preset(args) -> int:
    from pathlib import Path

    from .sweeps import run_sweep

    curves = load_preset(args.name)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for label, spec in curves.items():
        spec = _apply_overrides(spec, args)
        table = run_sweep(spec)
        path = out_dir / f"{args.name}_{label}.{args.format}"
        emit(table, args.format, path)
        print(f"wrote {path}")
    return EXIT_OK


_SELFTEST_SCENARIOS = (
    # (n_elements, snr_d_db, snr_e_db)
    (5, 10.0, -10.0),
    (5, 0.0, 0.0),
    (10, 20.0, -10.0),
    (10, 10.0, 0.0),
)


def _cmd_selftest(args) -> int:
    numerics = NumericsConfig(quad_order=args.quad_order or 200)
    quad_tol = 1e-6
    ok = True
    for n, gd, ge in _SELFTEST_SCENARIOS:
        params = SystemParams(n_elements=n, kappa_d_t2=0.01, kappa_d_r2=0.01,
                              kappa_e_t2=0.01, kappa_e_r2=0.01,
                              snr_d_db=gd, snr_e_db=ge, c_th=1.0)
        stats = derive_stats(params)
        label = f"N={n:2d} snr_d={gd:5.1f}dB snr_e={ge:5.1f}dB"

        s_cf = sop(params, stats, numerics)
        s_ref = sop_reference(params, stats, numerics)
        gap = abs(s_cf - s_ref)
        good = gap < quad_tol
        ok &= good
        print(f"[{'PASS' if good else 'FAIL'}] {label} sop closed={s_cf:.8f} "
              f"quadrature={s_ref:.8f} |diff|={gap:.2e}")

        c_cf = avg_secrecy_capacity(params, stats, numerics)
        c_ref = avg_secrecy_capacity_reference(params, stats, numerics)
        gap = abs(c_cf.value - c_ref.value)
        good = gap < quad_tol
        ok &= good
        print(f"[{'PASS' if good else 'FAIL'}] {label} asc closed={c_cf.value:.8f} "
              f"quadrature={c_ref.value:.8f} |diff|={gap:.2e}")

        if args.trials:
            mc = McConfig(trials=args.trials, seed=args.seed or 0)
            est = simulate_metrics(params, mc)
            for key, value in (("sop", s_cf), ("asc", c_cf.value)):
                e = est["sop" if key == "sop" else "asc_eq19"]
                gap = abs(value - e.value)
                units = gap / e.std_error if e.std_error > 0 else float("inf")
                within = gap <= 3.0 * e.std_error
                tag = "PASS" if within else ("FAIL" if args.strict_mc else "NOTE")
                if args.strict_mc:
                    ok &= within
                print(f"[{tag}] {label} {key} vs simulation gap={gap:.3e} "
                      f"({units:.1f} standard errors; model approximation)")
    print("selftest:", "PASS" if ok else "FAIL")
    return EXIT_OK if ok else EXIT_NUMERICAL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ris-secrecy",
        description="Secrecy outage and capacity of a RIS-aided wiretap link",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a sweep config")
    p_run.add_argument("config")
    p_run.add_argument("--out", default=None)
    p_run.add_argument("--format", choices=("csv", "json"), default="csv")

    p_preset = sub.add_parser("preset", help="run a bundled figure preset")
    p_preset.add_argument("name", choices=PRESET_NAMES)
    p_preset.add_argument("--out-dir", default=".")
    p_preset.add_argument("--format", choices=("csv", "json"), default="csv")

    p_self = sub.add_parser("selftest", help="oracle-equivalence suite")
    p_self.add_argument("--strict-mc", action="store_true",
                        help="fail when simulation gaps exceed 3 standard errors")

    for p in (p_run, p_preset, p_self):
        p.add_argument("--trials", type=int, default=None)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--quad-order", type=int, default=None)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "preset":
            return _cmd_preset(args)
        return _cmd_selftest(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ConvergenceError, ArithmeticError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
