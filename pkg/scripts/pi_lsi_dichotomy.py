"""Poincare stays bounded, log-Sobolev grows like |log p| for p N(0,1) + q U(B_1).

Writes a CSV with, for each p = 10^-k: the nested PI bound, the spectral gap,
the nested LSI bound, the combined bound with fitted C_n, and the Bobkov-Gotze
functional (a lower estimate of 1/alpha up to universal factors).

    python scripts/pi_lsi_dichotomy.py --kmax 8 -o dichotomy.csv
"""
import argparse
import csv
import math
import sys

from mixbound import criteria as K
from mixbound import scenarios
from mixbound.verify import lsi_lower_bound_1d, refined_spectral_gap


def rows(kmax: int):
    sc = scenarios.get("uniform-gauss")
    cn = K.fit_combined_constant(1)
    for k in range(1, kmax + 1):
        p = 10.0**-k
        b = sc.bounds(p)
        spec = sc.spec(p)
        yield {
            "p": p,
            "log10_inv_p": k,
            "pi_nested": b["pi_nested"]["inverse_constant"],
            "inv_spectral_gap": 1.0 / refined_spectral_gap(spec).lambda1,
            "lsi_nested": b["lsi_nested"]["inverse_constant"],
            "lsi_combined": K.uniform_gaussian_combined_bound(p, 1, cn),
            "bobkov_gotze": lsi_lower_bound_1d(spec),
            "abs_log_p": abs(math.log(p)),
        }


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--kmax", type=int, default=8)
    ap.add_argument("-o", "--output")
    args = ap.parse_args(argv)
    out = open(args.output, "w", newline="") if args.output else sys.stdout
    try:
        data = list(rows(args.kmax))
        w = csv.DictWriter(out, fieldnames=list(data[0]), lineterminator="\n")
        w.writeheader()
        for r in data:
            w.writerow({k: (f"{v:.10g}" if isinstance(v, float) else v) for k, v in r.items()})
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


if __name__ == "__main__":
    sys.exit(main())
