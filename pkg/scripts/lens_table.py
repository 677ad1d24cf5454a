"""Equivariant homology of the lens-space quotients for a grid of (n, m)."""
from __future__ import annotations

import argparse
import time

from rfhkit.mbhomology import RfhSphereSpec, rfh_lens_homology


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, nargs="+", default=[2, 3])
    ap.add_argument("--m", type=int, nargs="+", default=list(range(1, 9)))
    args = ap.parse_args()
    print("| n | m | dims (window) | seconds |")
    print("|---:|---:|---|---:|")
    for n in args.n:
        for m in args.m:
            t0 = time.perf_counter()
            dims = rfh_lens_homology(RfhSphereSpec(n, m))
            values = sorted(set(dims.values()))
            print(f"| {n} | {m} | {values} over {len(dims)} degrees | {time.perf_counter() - t0:.4f} |")


if __name__ == "__main__":
    main()
