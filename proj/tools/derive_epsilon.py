#!/usr/bin/env python3
"""Check that h^2 + eps*g stays positive for the oval example.

g(x, y) = y^2 + x(x-1)(x-2)(x-3), h(x, y) = x - 3/2.

Minimizes h^2 + eps*g over a grid of the bounding box with exact rationals
and prints the minimum for each candidate eps.  y only adds eps*y^2 >= 0, so
the minimum sits on y = 0; outside the box the quartic term dominates.

With u = x - 3/2 the restriction to y = 0 is
    eps*u^4 + (1 - 5/2*eps)*u^2 + 9/16*eps,
which is positive for 0 < eps < 2/5 with minimum 9/16*eps at u = 0.
"""
import argparse
from fractions import Fraction


def q(x, y, eps):
    g = y * y + x * (x - 1) * (x - 2) * (x - 3)
    h = x - Fraction(3, 2)
    return h * h + eps * g


def grid_min(eps, lo=-2, hi=5, ylo=-3, yhi=3, steps=280):
    best = None
    where = None
    for i in range(steps + 1):
        x = Fraction(lo) + Fraction(hi - lo, steps) * i
        for j in range(0, steps // 4 + 1):
            y = Fraction(ylo) + Fraction(yhi - ylo, steps // 4) * j
            v = q(x, y, eps)
            if best is None or v < best:
                best, where = v, (x, y)
    return best, where


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--eps", default="1/100", help="candidate epsilon as p/q")
    ap.add_argument("--steps", type=int, default=280)
    args = ap.parse_args()
    eps = Fraction(args.eps)
    best, where = grid_min(eps, steps=args.steps)
    closed = Fraction(9, 16) * eps
    print(f"eps = {eps}")
    print(f"grid minimum = {best} ({float(best):.6g}) at x = {where[0]}, y = {where[1]}")
    print(f"closed-form minimum on y = 0: {closed} ({float(closed):.6g})")
    ok = best > 0 and eps < Fraction(2, 5)
    print("positive" if ok else "NOT positive")
    return 0 if ok else 1


if __name__ == "__main__":
    raise SystemExit(main())
