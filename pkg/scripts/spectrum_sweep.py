"""Shoot twisted orbits on S^3 from random seeds and tabulate period, action and diagnostics."""
from __future__ import annotations

import argparse
import math

import numpy as np

from rfhkit.errors import RfhkitError
from rfhkit.hamflow import hypersurface_from_spec
from rfhkit.twistorbit import TwistSpec, action_value, orbit_report, shoot, spectrum_sphere


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--m", type=int, nargs="+", default=[2, 3, 4, 5])
    ap.add_argument("--seeds", type=int, default=5)
    ap.add_argument("--rng", type=int, default=0)
    args = ap.parse_args()

    sigma = hypersurface_from_spec("sphere", {"n": 2})
    rng = np.random.default_rng(args.rng)
    print("m  tau           nearest k  |tau-tau_k|  residual  |A-tau|   kernel  deck  cz")
    for m in args.m:
        tw = TwistSpec.rotation(m, (1, 1))
        spectrum = spectrum_sphere(m, range(-1, 5))
        for _ in range(args.seeds):
            x = sigma.project(rng.normal(size=4))
            seed_tau = rng.uniform(0.2, 2 * math.pi)
            try:
                orbit = shoot(sigma, tw, x, seed_tau)
            except RfhkitError as exc:
                print(f"{m}  seed {seed_tau:.3f} failed: {exc}")
                continue
            k = int(np.argmin([abs(orbit.tau - t) for t in spectrum])) - 1
            rep = orbit_report(orbit, sigma, tw)
            gap = abs(action_value(orbit, sigma) - orbit.tau)
            print(f"{m}  {orbit.tau:12.9f}  {k:9d}  {abs(orbit.tau - spectrum[k + 1]):.1e}      "
                  f"{orbit.residual:.1e}   {gap:.1e}  {rep.kernel_dim:6d}  {rep.deck_index:4d}  {rep.cz_index}")


if __name__ == "__main__":
    main()
