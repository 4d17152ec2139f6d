"""Measured constants on the identity fixture across n and intervals."""

import argparse

from hhsandwich.ostrowski import PROBES, sharpness_probe
from hhsandwich.quadrature import Interval


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--ns", type=int, nargs="+", default=[1, 2, 8, 64, 1024])
    parser.add_argument("--a", type=float, default=0.0)
    parser.add_argument("--b", type=float, default=1.0)
    args = parser.parse_args()

    interval = Interval(args.a, args.b)
    print("n," + ",".join(PROBES))
    for n in args.ns:
        results = [sharpness_probe(tid, interval, n) for tid in PROBES]
        cells = [f"{r.measured_constant:.17g}{'' if r.passed else '*'}" for r in results]
        print(f"{n}," + ",".join(cells))


if __name__ == "__main__":
    main()
