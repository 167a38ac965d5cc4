#!/usr/bin/env python3
"""Monte Carlo validation of the large-outbreak probability.

For a handful of (c, mu, p) points, compares the theoretical pi with the
fraction of simulated epidemics whose final size clears the n^(2/3)
threshold.  Takes a couple of minutes at the default settings.
"""

import sys

from rigepi.cli import main

POINTS = "0.5:4:0.5,0.3:4:0.4,0.7:4:0.5,0.5:4:0.3"

if __name__ == "__main__":
    out = sys.argv[1] if len(sys.argv) > 1 else "results/validation"
    sys.exit(
        main(
            [
                "validate",
                "--points", POINTS,
                "--n", "20000",
                "--trials", "500",
                "--seed", "314159",
                "--out", out,
            ]
        )
    )
