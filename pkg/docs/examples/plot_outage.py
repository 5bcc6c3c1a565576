"""Plot an outage CSV produced by `fdsc outage` on a log scale.

    fdsc outage --antennas 1,1,1,1 --w 0 --r-dl 0.25 --r-ul 0.25 \
        --trials 200000 --rho-db 15,20,25,30,35 --seed 42 --out run4
    python docs/examples/plot_outage.py run4.csv
"""

import csv
import sys

import matplotlib.pyplot as plt


def main(path):
    db, p, lo, hi = [], [], [], []
    with open(path) as f:
        for row in csv.DictReader(f):
            db.append(float(row["rho_db"]))
            p.append(float(row["p_out"]))
            lo.append(float(row["ci_low"]))
            hi.append(float(row["ci_high"]))
    plt.semilogy(db, p, "o-", label="outage probability")
    plt.fill_between(db, lo, hi, alpha=0.25, label="95% Wilson interval")
    plt.xlabel("nominal SNR (dB)")
    plt.ylabel("outage probability")
    plt.legend()
    plt.grid(alpha=0.3, which="both")
    out = path.replace(".csv", ".png")
    plt.savefig(out, dpi=150, bbox_inches="tight")
    print(f"wrote {out}")


if __name__ == "__main__":
    main(sys.argv[1])
