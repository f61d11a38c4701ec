#!/usr/bin/env python3
"""Sweep the coupling constant of the full (non-flat) system on sl2 with the
symmetric-power bundles Sym^k C^2, B = identity."""

import argparse

import numpy as np

import liestrom as ls
from liestrom.bundle import gram_matrix


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--kmax", type=int, default=4)
    parser.add_argument("--t", type=float, nargs="*", default=[-1.0, 0.0, 0.5, 2.0])
    args = parser.parse_args()

    frame = ls.identity_frame(ls.sl2c())
    print(f"{'k':>2s} {'rank':>4s} {'gram':>6s} " + " ".join(f"{f'alpha(t={t:g})':>16s}" for t in args.t))
    for k in range(1, args.kmax + 1):
        rep = ls.sym_power_rep(frame, k)
        twist = ls.make_twist(rep, np.eye(rep.m))
        gamma = float(gram_matrix(twist.eprime)[0, 0].real)
        cells = []
        for t in args.t:
            report = ls.solve_full_system(frame, rep, twist, t)
            if report.verdict is ls.Verdict.UNIQUE:
                cells.append(f"{report.alpha_prime:16.6g}")
            else:
                cells.append(f"{report.verdict.value:>16s}")
        print(f"{k:2d} {rep.m:4d} {gamma:6.1f} " + " ".join(cells))


if __name__ == "__main__":
    main()
