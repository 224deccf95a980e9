"""Isomorphism-criterion sweep over all radicands below LIMIT.

    python scripts/run_compare_sweep.py 2000 --out sweep.json
"""

import argparse
import hashlib
import json
import time

from starkcl.stark import compare_sweep


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("limit", type=int, nargs="?", default=2000)
    ap.add_argument("--precision", type=int, default=32)
    ap.add_argument("--out")
    args = ap.parse_args()

    t = time.time()
    rep = compare_sweep(args.limit, args.precision)
    blob = json.dumps(rep, sort_keys=True)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(blob)
    print(f"{rep['n_fields']} fields, {rep['n_pairs']} pairs in {time.time() - t:.1f}s")
    print("sha256", hashlib.sha256(blob.encode()).hexdigest())
    for key, cell in rep["confusion"].items():
        print(f"{key:>24}  " + "  ".join(f"{k}={v}" for k, v in cell.items()))


if __name__ == "__main__":
    main()
