"""Sup-distance between delay approximations and the direct solve as epsilon -> 0."""

import argparse

from abcfrac.solver import IVProblem, RhsFunction, SolverConfig, delay_convergence_study


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--alpha", type=float, default=0.5)
    ap.add_argument("--h", type=float, default=1e-3)
    ap.add_argument("--omega0", type=float, default=0.0)
    args = ap.parse_args()

    rhs = RhsFunction(lambda t, w: t - 0.1 * w, 1.0, 0.1, 1.0, 1.0, name="tau - 0.1 omega")
    problem = IVProblem(rhs, args.omega0, 1.0, args.alpha)
    epsilons = [0.2, 0.1, 0.05, 0.025, 0.0125]
    w0 = args.omega0
    study = delay_convergence_study(problem, lambda s: w0, epsilons, SolverConfig(args.h))
    print("epsilon   sup distance")
    for eps, dist in study:
        print(f"{eps:<9g} {dist:.4e}")


if __name__ == "__main__":
    main()
