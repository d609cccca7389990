#!/usr/bin/env python3
# SPDX-License-Identifier: Apache-2.0
"""Brute-force nonresonance margin for u_tt = u_xx - u (chi1 = chi2 = 1, d = 1).

Bands are omega_n(k) = sqrt(1 + (k + m)^2) sorted over m, with omega_{-n} = -omega_n.
The margin is min |j omega_n0(k0) - omega_n(j k0)| over j in {1, -1, 3, -3} and
0 < |n| <= n_scan, leaving out (n0, 1) and (-n0, -1).
"""
import argparse
from fractions import Fraction

import mpmath as mp

mp.mp.dps = 40


def reduce(k):
    k = Fraction(k)
    shift = -((Fraction(1, 2) - k) // 1)
    return k - shift


def bands(k, count):
    k = reduce(k)
    lam = sorted(1 + (mp.mpf(k.numerator) / k.denominator + m) ** 2 for m in range(-count - 2, count + 3))
    return [mp.sqrt(v) for v in lam[:count]]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--k0", default="1/10")
    ap.add_argument("--n0", type=int, default=1)
    ap.add_argument("--n-scan", type=int, default=20)
    a = ap.parse_args()
    k0 = Fraction(a.k0)
    omega0 = bands(k0, a.n0)[a.n0 - 1]
    best = None
    for j in (1, -1, 3, -3):
        om = bands(j * k0, a.n_scan)
        for n in range(1, a.n_scan + 1):
            for sign in (1, -1):
                if (sign * n, j) in ((a.n0, 1), (-a.n0, -1)):
                    continue
                d = abs(j * omega0 - sign * om[n - 1])
                if best is None or d < best[0]:
                    best = (d, sign * n, j)
    print(f"omega0 = {mp.nstr(omega0, 20)}")
    print(f"margin = {mp.nstr(best[0], 20)}  band = {best[1]}  harmonic = {best[2]}")


if __name__ == "__main__":
    main()
