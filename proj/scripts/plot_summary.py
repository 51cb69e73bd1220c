#!/usr/bin/env python3
"""Plot mean +/- std curves from a summary.csv written by `scent`.

    python3 scripts/plot_summary.py out/xc/summary.csv -o xc.png
    python3 scripts/plot_summary.py out/dual_sim/summary.csv --metric sq_error --logy
"""

import argparse

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import pandas as pd


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("summary", help="summary.csv (config_id,metric,iteration,mean,std,count)")
    ap.add_argument("-m", "--metric", default="objective")
    ap.add_argument("-o", "--out", default=None, help="image path; defaults to <summary>_<metric>.png")
    ap.add_argument("--logy", action="store_true")
    ap.add_argument("--logx", action="store_true")
    args = ap.parse_args()

    df = pd.read_csv(args.summary)
    df = df[df["metric"] == args.metric]
    if df.empty:
        raise SystemExit(f"no rows with metric '{args.metric}' in {args.summary}")

    fig, ax = plt.subplots(figsize=(6, 4))
    for cid, g in df.groupby("config_id"):
        g = g.sort_values("iteration")
        ax.plot(g["iteration"], g["mean"], label=cid)
        if (g["count"] > 1).any():
            ax.fill_between(g["iteration"], g["mean"] - g["std"], g["mean"] + g["std"], alpha=0.2)
    ax.set_xlabel("iteration")
    ax.set_ylabel(args.metric)
    if args.logy:
        ax.set_yscale("log")
    if args.logx:
        ax.set_xscale("log")
    ax.legend(fontsize=7)
    fig.tight_layout()
    out = args.out or args.summary.rsplit(".", 1)[0] + f"_{args.metric}.png"
    fig.savefig(out, dpi=120)
    print(out)


if __name__ == "__main__":
    main()
