"""Error of AB-integral after ABC-derivative on m(tau) = tau^2 as h shrinks."""

import argparse

import numpy as np

from abcfrac.operators import DifferentiableInput, UniformGrid, ab_integral, abc_derivative


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--alpha", type=float, default=0.5)
    ap.add_argument("--h0", type=float, default=1e-2)
    ap.add_argument("--levels", type=int, default=5)
    args = ap.parse_args()

    m = DifferentiableInput(lambda t: t * t, lambda t: 2 * t)
    prev = None
    print("h          max error   ratio")
    for k in range(args.levels):
        h = args.h0 / 2**k
        grid = UniformGrid.over(1.0, h)
        back = ab_integral(abc_derivative(m, args.alpha, grid=grid), args.alpha)
        err = float(np.max(np.abs(back.values - grid.nodes**2)))
        ratio = "" if prev is None else f"{prev / err:6.2f}"
        print(f"{h:<10.3g} {err:.3e}  {ratio}")
        prev = err


if __name__ == "__main__":
    main()
