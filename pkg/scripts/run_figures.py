#!/usr/bin/env python3
"""Reproduce all figure sweeps and write one CSV per curve.

Runs the bundled fig2..fig6 presets at a chosen trial count (default:
the CI profile baked into the presets) and drops figure-ready CSVs into
the output directory. Plotting is left to downstream tools, e.g.:

    python scripts/run_figures.py --out-dir results --trials 1000000
"""

import argparse
import dataclasses
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from ris_secrecy.sweeps import PRESET_NAMES, emit, load_preset, run_sweep


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", default="results")
    parser.add_argument("--trials", type=int, default=None,
                        help="override the preset trial count")
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--presets", nargs="*", default=list(PRESET_NAMES))
    args = parser.parse_args()

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for name in args.presets:
        for label, spec in load_preset(name).items():
            mc = spec.mc
            if args.trials is not None:
                mc = dataclasses.replace(mc, trials=args.trials)
            if args.seed is not None:
                mc = dataclasses.replace(mc, seed=args.seed)
            spec = dataclasses.replace(spec, mc=mc)
            t0 = time.monotonic()
            table = run_sweep(spec)
            path = out_dir / f"{name}_{label}.csv"
            emit(table, "csv", path)
            print(f"{path}  ({len(table)} rows, {time.monotonic() - t0:.1f} s)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
