"""Subsolutions D m <= B/(1-a) m that do and do not stay below m0 E_a(tau^a).

For f = c k omega tau / T the solution is a subsolution for every c, but the
bound only holds for small c. exp(5 tau) is a second, closed-form example.
"""

import argparse
import math

import numpy as np

from abcfrac.inequality_lab import check_ml_growth_bound
from abcfrac.operators import DifferentiableInput, Normalization, Trajectory, UniformGrid, abc_derivative
from abcfrac.solver import IVProblem, RhsFunction, SolverConfig, solve_ivp

B = Normalization()


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--alpha", type=float, default=0.5)
    ap.add_argument("--h", type=float, default=2e-3)
    args = ap.parse_args()
    a = args.alpha
    k = B(a) / (1 - a)

    print("fixture          max(Dm - k m)   worst excess over bound   at tau")
    for c in (0.2, 0.3, 0.5, 0.7, 0.9):
        rhs = RhsFunction(lambda t, w, c=c: c * k * w * t, 0.0, c * k, 10.0, 10.0)
        m = solve_ivp(IVProblem(rhs, 1.0, 1.0, a), SolverConfig(args.h))
        d = abc_derivative(m, a).values
        r = check_ml_growth_bound(m, 1.0, a, abc_values=d)
        print(f"c = {c:<12g} {np.max(d - k * m.values):14.3f}   {r.worst_violation:23.4g}   {r.violation_location:.3f}")

    grid = UniformGrid.over(1.0, args.h)
    e5 = DifferentiableInput(lambda t: math.exp(5 * t), lambda t: 5 * math.exp(5 * t))
    vals, _ = e5.sample(grid)
    d = abc_derivative(e5, a, grid=grid).values
    r = check_ml_growth_bound(Trajectory(grid, vals), 1.0, a, abc_values=d)
    print(f"exp(5 tau)       {np.max(d - k * vals):14.3f}   {r.worst_violation:23.4g}   {r.violation_location:.3f}")


if __name__ == "__main__":
    main()
