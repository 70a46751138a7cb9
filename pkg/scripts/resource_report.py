#!/usr/bin/env python3
"""Resource tables: dense-circuit formulas, the serial mid-reset figures
and the post-circuit qubit-reuse schedule."""

import argparse

import stateprep as sp


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n-max", type=int, default=8)
    parser.add_argument("--pool-max", type=int, default=28,
                        help="largest physical qubit pool for the reuse table")
    parser.add_argument("--reuse-n", type=int, default=3)
    args = parser.parse_args()

    print("dense circuit formulas")
    print("n,qubits,cswaps,depth,depth_parallel,midreset_qmin,midreset_depth")
    for n in range(1, args.n_max + 1):
        f = sp.dc_formulas(n)
        if n > 2:
            mr = sp.midreset_formulas(n)
            extra = f"{mr.q_min},{mr.depth}"
        else:
            extra = ","
        print(f"{n},{f.qubits},{f.cswaps},{f.depth},{f.depth_parallel},{extra}")

    print()
    print(f"qubit reuse schedule for n={args.reuse_n}")
    print("pool,total_circuits,max_parallel,rounds")
    need = 2**args.reuse_n - 1
    for pool in range(need, args.pool_max + 1):
        s = sp.reuse_schedule(pool, args.reuse_n)
        rounds = "+".join(map(str, s.rounds))
        print(f"{pool},{s.total_circuits},{s.max_parallel},{rounds}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
