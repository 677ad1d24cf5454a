"""Count gradient cascades on the built-in surfaces and print the resulting boundary matrices."""
from __future__ import annotations

import argparse
import time

from rfhkit.gradient2d import cascade_datum_2d, teapot_matrices, teapot_profile
from rfhkit.mbhomology import build_complex, homology_of_datum, teapot_datum


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--tilts", type=float, nargs="*", default=[0.1, 0.25])
    args = ap.parse_args()

    t0 = time.perf_counter()
    d2, d1 = teapot_matrices()
    print(f"numeric  d2 = {d2}  d1 = {d1}  ({time.perf_counter() - t0:.2f}s)")
    hand = build_complex(teapot_datum())
    print(f"hand     d2 = {hand.boundary(2).to_list()}  d1 = {hand.boundary(1).to_list()}")
    print("sphere homology:", homology_of_datum(cascade_datum_2d("sphere")))
    for tilt in args.tilts:
        print(f"teapot tilt {tilt}: homology", homology_of_datum(cascade_datum_2d(teapot_profile(tilt=tilt))))


if __name__ == "__main__":
    main()
