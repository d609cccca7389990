#!/usr/bin/env python3
# SPDX-License-Identifier: Apache-2.0
"""Fine-bisection shooting oracle for the canonical radial ground state.

Solves R'' + (d-1)/r R' - R + R^3 = 0, R'(0) = 0, R -> 0 by bisection on R(0)
using scipy's DOP853 at tight tolerances. The printed value of R(0) is frozen
into tests/unit/test_townes.cpp; this script is kept independent of the C++
solver so it can be re-run as a cross-check:

    python3 tools/oracles/townes_oracle.py --dim 2 --tol 1e-10
"""

import argparse

import numpy as np
from scipy.integrate import solve_ivp


def classify(r0, dim, rtol, r_end=30.0):
    """Return +1 if the orbit crosses zero (overshoot), -1 if R' turns positive
    while R > 0 (undershoot), 0 if neither happens before r_end."""
    h = 1e-6
    y0 = [r0 + h * h / (2 * dim) * (r0 - r0**3), h / dim * (r0 - r0**3)]

    def rhs(r, y):
        return [y[1], -(dim - 1) / r * y[1] + y[0] - y[0] ** 3]

    def crosses_zero(r, y):
        return y[0]

    crosses_zero.terminal = True
    crosses_zero.direction = -1

    def turns_up(r, y):
        return y[1]

    turns_up.terminal = True
    turns_up.direction = 1

    sol = solve_ivp(rhs, (h, r_end), y0, method="DOP853", rtol=rtol,
                    atol=rtol * 1e-3, events=(crosses_zero, turns_up))
    if sol.t_events[0].size:
        return 1
    if sol.t_events[1].size:
        return -1
    return 0


def shoot(dim, rtol, lo=0.1, hi=100.0):
    if classify(lo, dim, rtol) != -1 or classify(hi, dim, rtol) != 1:
        raise RuntimeError("initial bracket does not straddle the ground state")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        c = classify(mid, dim, rtol)
        if c == 1:
            hi = mid
        elif c == -1:
            lo = mid
        else:
            return mid
        if hi - lo < 1e-14:
            break
    return 0.5 * (lo + hi)


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--dim", type=int, default=2)
    parser.add_argument("--tol", type=float, default=1e-10)
    args = parser.parse_args()
    r0 = shoot(args.dim, args.tol)
    print(f"dim={args.dim} tol={args.tol:g} R(0)={r0:.15f}")
    if args.dim == 1:
        print(f"analytic sqrt(2)={np.sqrt(2.0):.15f}")


if __name__ == "__main__":
    main()
