"""Print H(t) and F(t) for a convex function, both F normalisations."""

import argparse

from hhsandwich.funcspec import FunctionSpec
from hhsandwich.hhmaps import sweep_maps
from hhsandwich.quadrature import UniformPartition


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--function", "-f", default="exp(x)")
    parser.add_argument("--a", type=float, default=0.0)
    parser.add_argument("--b", type=float, default=1.0)
    parser.add_argument("--n", type=int, default=2)
    parser.add_argument("--t-steps", type=int, default=10)
    args = parser.parse_args()

    f = FunctionSpec.from_text(args.function, {"convex"})
    p = UniformPartition.of(args.a, args.b, args.n)
    halved = sweep_maps(f, p, args.t_steps, halved=True)
    verbatim = sweep_maps(f, p, args.t_steps, halved=False)
    print("t,H,F_halved,F_verbatim")
    for t, H, F, G in zip(halved.t, halved.H, halved.F, verbatim.F):
        print(f"{t:.4f},{H:.12f},{F:.12f},{G:.12f}")


if __name__ == "__main__":
    main()
