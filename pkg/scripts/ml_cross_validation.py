"""Compare the series and spectral routes for E_alpha(-tau^alpha) on [0, tau_max]."""

import argparse
import time

import numpy as np

from abcfrac.special_functions import MLParams, ml1, ml_neg_spectral, ml_series


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--alphas", type=float, nargs="+", default=[0.3, 0.5, 0.7])
    ap.add_argument("--tau-max", type=float, default=10.0)
    ap.add_argument("--n", type=int, default=50)
    args = ap.parse_args()

    print("alpha  max|ml1 - spectral|  max|raw series - spectral|  seconds")
    for a in args.alphas:
        start = time.perf_counter()
        dispatch, raw = 0.0, 0.0
        for tau in np.linspace(0.0, args.tau_max, args.n):
            ref = ml_neg_spectral(a, float(tau))
            dispatch = max(dispatch, abs(ml1(a, -(tau**a)) - ref))
            try:
                raw = max(raw, abs(ml_series(MLParams(a), -(tau**a))[0] - ref))
            except ArithmeticError:
                raw = float("inf")
        print(f"{a:5.2f}  {dispatch:20.3e}  {raw:26.3e}  {time.perf_counter() - start:7.3f}")


if __name__ == "__main__":
    main()
