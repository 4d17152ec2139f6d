"""Where the increasing-function chain breaks: slack of its first link as y
sweeps [a, b], for the identity map and a few generated functions.

Negative slack means the left member fell below the middle one.
"""

import argparse

import numpy as np

from hhsandwich.funcspec import ConvexGeneratorConfig, FunctionSpec, generate_convex
from hhsandwich.oracle import reference_integral
from hhsandwich.ostrowski import thm5_bound
from hhsandwich.quadrature import Interval, UniformPartition


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, default=4)
    parser.add_argument("--points", type=int, default=11)
    parser.add_argument("--functions", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    unit = Interval(0.0, 1.0)
    cases = [(FunctionSpec.from_text("x", {"convex", "positive", "increasing"}), unit)]
    for k in range(args.functions):
        cfg = ConvexGeneratorConfig(seed=args.seed + k, shape_target="increasing_positive_convex")
        cases.append((generate_convex(cfg, unit), unit))

    for f, interval in cases:
        exact = reference_integral(f, interval).value
        p = UniformPartition(interval, args.n)
        print(f.label or "x")
        for y in np.linspace(interval.a, interval.b, args.points):
            r = thm5_bound(f, p, y, exact)
            print(f"  y={y:.2f}  left {r.lhs:+.6f}  middle {r.rhs:+.6f}  slack {r.slack:+.6f}  {'ok' if r.holds else 'FAIL'}")


if __name__ == "__main__":
    main()
