#!/usr/bin/env python3
"""Render the CSV files of a run directory to PNG plots.

Usage: plot_run.py OUT_DIR [--save DIR]

Trajectory files get one panel per column group (quadratures, qubit,
diagnostics); spectrum and marginal files get single panels. Requires
matplotlib; prints a summary and exits cleanly without it.
"""

import argparse
import csv
import json
import sys
from pathlib import Path


def read_csv(path):
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    return {k: [float(r[k]) for r in rows] for k in rows[0]} if rows else {}


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("out_dir", type=Path)
    ap.add_argument("--save", type=Path, help="directory for PNGs (default: the run directory)")
    args = ap.parse_args()

    manifest = args.out_dir / "manifest.json"
    if manifest.exists():
        meta = json.loads(manifest.read_text())
        print(f"run {meta['name']}: {len(meta['jobs'])} jobs, {meta['total_wall_ms']:.0f} ms")

    try:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        print("matplotlib not available; nothing plotted")
        return 0

    save_dir = args.save or args.out_dir
    save_dir.mkdir(parents=True, exist_ok=True)

    for path in sorted(args.out_dir.glob("traj_*.csv")):
        cols = read_csv(path)
        t = cols["t_us"]
        quad = [c for c in cols if c[0] in "XP" and c[1:].isdigit()]
        fig, axes = plt.subplots(3, 1, figsize=(8, 9), sharex=True)
        for c in quad:
            axes[0].plot(t, cols[c], label=c)
        axes[0].set_ylabel("quadratures")
        for c in ("sx", "sy", "sz"):
            axes[1].plot(t, cols[c], label=c)
        axes[1].set_ylabel("qubit")
        axes[2].semilogy(t, [max(v, 1e-18) for v in cols["leak"]], label="leak")
        axes[2].plot(t, [abs(v - 1) + 1e-18 for v in cols["norm"]], label="|norm-1|")
        axes[2].set_ylabel("diagnostics")
        axes[2].set_xlabel("t (us)")
        for ax in axes:
            ax.legend(loc="upper right", fontsize=8)
        out = save_dir / (path.stem + ".png")
        fig.savefig(out, dpi=120, bbox_inches="tight")
        plt.close(fig)
        print(f"wrote {out}")

    for stem, xlabel in (("spectrum", "f (MHz)"), ("marginal", "x")):
        for path in sorted(args.out_dir.glob(f"{stem}_*.csv")):
            cols = read_csv(path)
            keys = list(cols)
            fig, ax = plt.subplots(figsize=(8, 4))
            ax.plot(cols[keys[0]], cols[keys[1]])
            ax.set_xlabel(xlabel)
            ax.set_ylabel(keys[1])
            out = save_dir / (path.stem + ".png")
            fig.savefig(out, dpi=120, bbox_inches="tight")
            plt.close(fig)
            print(f"wrote {out}")

    return 0


if __name__ == "__main__":
    sys.exit(main())
