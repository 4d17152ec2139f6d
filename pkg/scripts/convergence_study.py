"""Bracket width against n for a few integrands, with the fitted order.

    python scripts/convergence_study.py --n-start 16 --n-max 1024
"""

import argparse

from hhsandwich.funcspec import FunctionSpec
from hhsandwich.quadrature import Interval
from hhsandwich.refine import RefinementPolicy, convergence_order, integrate_to_tolerance

CASES = [
    ("exp(x)", 0.0, 1.0),
    ("x^2", 0.0, 1.0),
    ("x^4 + exp(-x)", -1.0, 2.0),
    ("abs(x - 1/3)", 0.0, 1.0),
    ("max(0, x - 0.3) + 2*max(0, 0.7 - x)", 0.0, 1.0),
]


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n-start", type=int, default=16)
    parser.add_argument("--n-max", type=int, default=1024)
    args = parser.parse_args()

    policy = RefinementPolicy(abs_tol=1e-300, n_start=args.n_start, n_max=args.n_max)
    for text, a, b in CASES:
        f = FunctionSpec.from_text(text, {"convex"})
        _, trace = integrate_to_tolerance(f, Interval(a, b), policy)
        print(f"{text} on [{a}, {b}]")
        prev = None
        for row in trace.rows:
            ratio = "" if prev is None or prev == 0 else f"  ratio {row.width / prev:.4f}"
            print(f"  n={row.n:<6d} width {row.width:.6e}{ratio}")
            prev = row.width
        try:
            print(f"  order {convergence_order(trace):.4f}")
        except ValueError as exc:
            print(f"  order undefined ({exc})")


if __name__ == "__main__":
    main()
