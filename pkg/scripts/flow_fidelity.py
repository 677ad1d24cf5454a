"""RK4 endpoint error and energy drift against the closed-form flows as the step shrinks."""
from __future__ import annotations

import argparse
import math

import numpy as np

from rfhkit.hamflow import closed_flow_magnetic_torus, flow, magnetic_torus_model, sphere_flow_model, standard_J


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--T", type=float, default=math.pi)
    ap.add_argument("--dts", type=float, nargs="+", default=[1e-1, 3e-2, 1e-2, 3e-3, 1e-3])
    args = ap.parse_args()

    rng = np.random.default_rng(0)
    x0 = rng.normal(size=4)
    x0 /= np.linalg.norm(x0)
    sphere = sphere_flow_model(2)
    J = standard_J(2)
    torus = magnetic_torus_model(J, c=0.5)
    y0 = np.array([0.1, 0.2, 0.3, -1.1])
    qT, pT = closed_flow_magnetic_torus(y0[:2], y0[2:], args.T, J, reduce=False)

    print("dt        sphere err  sphere drift  torus err   torus drift")
    prev = None
    for dt in args.dts:
        a = flow(sphere, x0, args.T, dt)
        b = flow(torus, y0, args.T, dt)
        err_s = np.linalg.norm(a.end - sphere.closed_flow(x0, args.T))
        err_t = np.linalg.norm(b.end - np.concatenate([qT, pT]))
        line = f"{dt:.1e}   {err_s:.2e}    {a.energy_drift:.2e}      {err_t:.2e}    {b.energy_drift:.2e}"
        if prev is not None and err_s > 0 and prev[1] > 0:
            line += f"   order ~ {math.log(prev[1] / err_s) / math.log(prev[0] / dt):.2f}"
        print(line)
        prev = (dt, err_s)


if __name__ == "__main__":
    main()
