"""Rewrite engine vs independent models, over several seeds.

The Weyl engine is compared with the truncated Fock representation and the
ideal structure constants with reduced word products.

    python scripts/oracle_agreement.py --trials 500 --seeds 0 1 2 3
"""
import argparse
import sys
import time

from ncrewrite.models import ideal_oracle_sweep, weyl_oracle_sweep


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=200)
    ap.add_argument("--seeds", type=int, nargs="+", default=[0])
    ap.add_argument("--fock-dim", type=int, default=32)
    ap.add_argument("--max-degree", type=int, default=5)
    args = ap.parse_args()

    ok = True
    for seed in args.seeds:
        for label, fn in (("weyl", lambda: weyl_oracle_sweep(args.trials, seed, args.max_degree, args.fock_dim)),
                          ("ideal", lambda: ideal_oracle_sweep(args.trials, seed))):
            t0 = time.perf_counter()
            rep = fn()
            print(f"{rep.summary()}  [{time.perf_counter() - t0:.2f} s]")
            if not rep.ok:
                ok = False
                print("   first mismatch:", rep.mismatches[0])
    sys.exit(0 if ok else 1)


if __name__ == "__main__":
    main()
