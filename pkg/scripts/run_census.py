#!/usr/bin/env python3
"""K4/K4' motif census: thinned versus unthinned graphs as n doubles.

The unthinned intersection graph keeps its mean K4' count bounded as n
grows, while independent edge thinning makes the mean K4' count grow
linearly; census.csv holds one row per (n, p, replicate).
"""

import sys

from rigepi.cli import main

if __name__ == "__main__":
    out = sys.argv[1] if len(sys.argv) > 1 else "results/census"
    sys.exit(
        main(
            [
                "census",
                "--beta", "0.25",
                "--gamma", "4",
                "--p", "0.5",
                "--n-list", "4000,8000",
                "--replicates", "64",
                "--seed", "2718",
                "--out", out,
            ]
        )
    )
