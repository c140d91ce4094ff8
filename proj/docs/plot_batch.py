#!/usr/bin/env python3
"""Plot per-cell convergence curves from a pathpref batch CSV.

usage: plot_batch.py batch.csv [--out figure.png] [--threshold 0.5]
"""
import argparse

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import pandas as pd


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("csv")
    ap.add_argument("--out", default="batch.png")
    ap.add_argument("--threshold", type=float, default=0.5)
    args = ap.parse_args()

    # Line 1 is the '#' header; '#' also appears inside scenario labels.
    df = pd.read_csv(args.csv, skiprows=1)
    df = df[df.status == "ok"].copy()
    if df.empty:
        raise SystemExit("no completed trials in " + args.csv)
    df["label"] = df.scenario + " " + df.user + " " + df.selector + " p_hat=" + df.p_hat.astype(str)

    fig, (left, right) = plt.subplots(1, 2, figsize=(12, 4.5))
    for label, cell in df.groupby("label", sort=False):
        median = cell.groupby("iteration").posterior_true.median()
        left.plot(median.index, median.values, label=label)
        best = cell.groupby("trial").posterior_true.cummax()
        reached = (best >= args.threshold).groupby(cell.iteration).mean()
        right.plot(reached.index, reached.values, label=label)

    left.set(xlabel="iteration", ylabel="median posterior of true region", ylim=(0, 1))
    right.set(xlabel="iteration", ylabel=f"fraction of trials reaching {args.threshold}",
              ylim=(0, 1))
    right.legend(fontsize="small", loc="lower right")
    fig.tight_layout()
    fig.savefig(args.out, dpi=150)
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
