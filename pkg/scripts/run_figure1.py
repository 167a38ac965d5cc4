#!/usr/bin/env python3
"""Full theory sweep over the clustering axis at mu=4.

Produces figure1.csv (one row per (c, p) grid point with R_0 and pi) and
thresholds.json with the R_0 = 1 crossing per p.  Feed the CSV to the plots
package to redraw the two-panel picture.
"""

import sys

from rigepi.cli import main

if __name__ == "__main__":
    out = sys.argv[1] if len(sys.argv) > 1 else "results/figure1"
    sys.exit(main(["sweep", "--mu", "4", "--p", "0.2,0.3,0.5", "--out", out]))
