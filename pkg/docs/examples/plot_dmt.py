"""Plot a DMT CSV produced by `fdsc dmt` (matplotlib required only here).

    fdsc dmt --antennas 2,1,1,2 --w 0.2 --alpha-s 1 --csit --out run1
    python docs/examples/plot_dmt.py run1.csv
"""

import csv
import sys

import matplotlib.pyplot as plt


def main(path):
    rs, lp, cf = [], [], []
    with open(path) as f:
        for row in csv.DictReader(f):
            rs.append(float(row["r"]))
            lp.append(float(row["d_lp"]))
            cf.append(float(row["d_closed_form"]) if row["d_closed_form"] else None)
    plt.plot(rs, lp, label="exponent LP", lw=2)
    if any(v is not None for v in cf):
        plt.plot(rs, cf, "--", label="closed form", lw=1.5)
    plt.xlabel("multiplexing gain r (symmetric)")
    plt.ylabel("diversity order d(r)")
    plt.legend()
    plt.grid(alpha=0.3)
    out = path.replace(".csv", ".png")
    plt.savefig(out, dpi=150, bbox_inches="tight")
    print(f"wrote {out}")


if __name__ == "__main__":
    main(sys.argv[1])
