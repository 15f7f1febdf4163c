"""Randomized submultiplicativity sweeps for the seminorm families.

Prints one line per sweep; exits non-zero if any sweep found a violation.

    python scripts/seminorm_fuzz.py --trials 1000 --seeds 0 1 2
"""
import argparse
import sys
import time

from ncrewrite.seminorms import (SamplerConfig, beta_phi, custom, find_submult_witness, mixed_check, p_n, phi0,
                                 phi_prime, q_n, submult_check, tensor_bound_sweep)


def sweeps(trials, seed, dim):
    """Zero-argument callables, so each sweep can be timed on its own."""
    cfg = SamplerConfig(trials=trials, seed=seed, dim=dim)
    out = [lambda n=n: submult_check(p_n(n), trials=trials, seed=seed, cfg=cfg, name=f"p_{n} ({dim}x{dim})")
           for n in range(4)]
    out += [lambda n=n: submult_check(q_n(n), trials=trials, seed=seed, cfg=cfg, name=f"q_{n}") for n in range(3)]
    out.append(lambda: submult_check(beta_phi(phi0()), trials=trials, seed=seed, cfg=cfg, name="beta PHI0"))
    out.append(lambda: submult_check(beta_phi(phi_prime(phi0())), trials=trials, seed=seed, cfg=cfg,
                                     name="beta PHI_PRIME"))
    out.append(lambda: mixed_check(phi0(), trials=trials, seed=seed, cfg=cfg))
    out.append(lambda: tensor_bound_sweep(trials=max(1, trials // 5), seed=seed))
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=300)
    ap.add_argument("--seeds", type=int, nargs="+", default=[0])
    ap.add_argument("--dim", type=int, default=16)
    args = ap.parse_args()

    bad = 0
    for seed in args.seeds:
        for sweep in sweeps(args.trials, seed, args.dim):
            t0 = time.perf_counter()
            rep = sweep()
            print(f"{rep.summary()}  [{time.perf_counter() - t0:.2f} s]")
            if not rep.ok:
                bad += 1
                v = rep.violations[0]
                print(f"   first violation: {v.lhs} > {v.rhs}")
    w = find_submult_witness(beta_phi(custom(lambda k: 1, "ONE")))
    print("constant weight:", "no witness" if w is None else f"witness {w.a} * {w.b}: {w.lhs} > {w.rhs}")
    sys.exit(1 if bad else 0)


if __name__ == "__main__":
    main()
