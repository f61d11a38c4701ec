#!/usr/bin/env python3
"""Print the flat-sector verdict table for the 3-dimensional unimodular
classes at a sweep of connection parameters."""

import argparse

import numpy as np

import liestrom as ls


def rows():
    canon = ls.semisimple_canonical_metric(ls.sl2c())
    return [
        ("abelian", ls.abelian(3), ls.identity_metric(3)),
        ("heisenberg", ls.heisenberg(), ls.identity_metric(3)),
        ("solvable_c(1,0,0)", ls.solvable_c(1, 0, 0), ls.identity_metric(3)),
        ("solvable_c(1,2,0)", ls.solvable_c(1, 2, 0), ls.identity_metric(3)),
        ("sl2 / canonical", ls.sl2c(), canon),
        ("sl2 / diag(2,1,1)", ls.sl2c(), ls.HermitianMetricData(np.diag([2.0, 1.0, 1.0]))),
    ]


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--t", type=float, nargs="*", default=[-1.0, 0.5, 2.0])
    args = parser.parse_args()

    header = f"{'algebra / metric':22s} {'t':>6s} {'balanced':>8s} {'verdict':>14s} {'alpha_prime':>12s}"
    print(header)
    print("-" * len(header))
    for name, alg, metric in rows():
        for t in args.t:
            rep = ls.flat_report(alg, metric, t)
            alpha = "-" if rep.alpha_prime is None else f"{rep.alpha_prime:.6g}"
            print(f"{name:22s} {t:6.2f} {str(rep.balanced):>8s} {rep.verdict.value:>14s} {alpha:>12s}")


if __name__ == "__main__":
    main()
