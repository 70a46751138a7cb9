#!/usr/bin/env python3
"""Width/depth tradeoff data across the block-size parameter.

Prints one CSV row per (n, lambda) with the closed-form qubit count and
gate depth, plus measured metrics from an actual synthesis for the sizes
where that is cheap.  Pipe the output into a plotting tool to see the
two exponential regimes meet in the middle.
"""

import argparse

import numpy as np

import stateprep as sp


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=int, nargs="+", default=[4, 6, 8, 10])
    parser.add_argument("--measure-up-to", type=int, default=8,
                        help="synthesize circuits for n up to this size")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    rng = np.random.default_rng(args.seed)
    print("n,lambda,qubits,depth,measured_qubits,measured_depth,measured_depth_full")
    for n in args.n:
        tree = None
        if n <= args.measure_up_to:
            x = rng.random(2**n) + 0.1
            tree = sp.build_tree(x / np.linalg.norm(x))
        for lam in range(1, n + 1):
            f = sp.hybrid_formulas(n, lam)
            row = f"{n},{lam},{f.qubits},{f.depth}"
            if tree is not None:
                m = sp.metrics(sp.synthesize_hybrid(tree, lam))
                row += f",{m.qubits},{m.depth_gates},{m.depth_full}"
            else:
                row += ",,,"
            print(row)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
