"""Sweep both Fedosov sign conventions and report which makes alpha multiplicative.

    python scripts/calibrate_fedosov.py --generators 3 --max-degree 4 --all
"""
import argparse
import json
import time

from ncrewrite.tensor import calibrate, calibration_sweep


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--generators", type=int, default=3)
    ap.add_argument("--max-degree", type=int, default=4)
    ap.add_argument("--truncation", type=int, default=6)
    ap.add_argument("--all", action="store_true", help="count every failing pair instead of stopping at one")
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args()

    t0 = time.perf_counter()
    res = calibration_sweep(args.generators, args.max_degree, args.truncation, None if args.all else 1)
    elapsed = time.perf_counter() - t0
    small = calibrate()
    rows = {s: {"pairs": r.pairs, "failures": len(r.failures),
                "first": None if not r.failures else [repr(x) for x in r.failures[0]]}
            for s, r in sorted(res.items())}
    if args.json:
        print(json.dumps({"small_calibration": small.sign, "sweep": rows, "seconds": round(elapsed, 2)}, indent=2))
        return
    print(f"two-generator calibration picks sign {small.sign:+d}")
    for s, row in rows.items():
        tag = "multiplicative" if not row["failures"] else f"{row['failures']} failing pairs"
        print(f"sign {s:+d}: {row['pairs']} pairs, {tag}")
        if row["first"]:
            print("   first counterexample:", " | ".join(row["first"]))
    print(f"{elapsed:.2f} s")


if __name__ == "__main__":
    main()
