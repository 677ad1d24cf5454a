"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 domain error (bad input data, solver failure).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, TextIO

import numpy as np

from rfhkit.errors import RfhkitError
from rfhkit.hamflow import flow, hypersurface_from_spec, model_from_spec
from rfhkit.mbhomology import MorseBottDatum, RfhSphereSpec, build_complex, dims_table, rfh_lens_homology
from rfhkit.sympindex import SymplecticPath, cz_index
from rfhkit.twistorbit import (
    Ball,
    MagneticTorusLevel,
    TwistSpec,
    displacement_energy,
    forcing_gap,
    lift_loop,
    magnetic_orbit_residuals,
    monodromy_kernel,
    orbit_report,
    shoot,
    spectrum_sphere,
    torus_family_state,
)
from rfhkit.z2complex import GradedComplexZ2, homology_dims

DEFAULT_TOL = 1e-9


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


@dataclass(frozen=True)
class CommandConfig:
    subcommand: str
    tol: float
    output: str
    args: argparse.Namespace


def fmt(x: float) -> str:
    return f"{x:.12g}"


def fmt_angle(x: float) -> str:
    """Multiples of pi with denominator at most 12 are shown symbolically."""
    for q in range(1, 13):
        p = round(x * q / math.pi)
        if abs(x - p * math.pi / q) < 1e-9:
            f = Fraction(p, q)
            if f == 0:
                return "0"
            num = {1: "", -1: "-"}.get(f.numerator, str(f.numerator))
            return f"{num}π" + (f"/{f.denominator}" if f.denominator != 1 else "")
    return fmt(x)


def _ints(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}")


def _floats(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise UsageError(f"expected comma-separated numbers, got {text!r}")


def _range(text: str) -> range:
    try:
        a, b = text.split("..")
        return range(int(a), int(b) + 1)
    except ValueError:
        raise UsageError(f"expected a range like 0..2, got {text!r}")


def _read_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise RfhkitError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise RfhkitError(f"malformed JSON in {path}: {exc}") from exc


def _dump(obj, out: TextIO) -> None:
    out.write(json.dumps(obj, sort_keys=True) + "\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="rfhkit", description="Twisted Rabinowitz-Floer computations.")
    p.add_argument("--tol", type=float, default=None, help="solver tolerance (default: $RFHKIT_TOL or 1e-9)")
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    h = sub.add_parser("homology", help="homology of a complex or Morse-Bott datum JSON")
    src = h.add_mutually_exclusive_group(required=True)
    src.add_argument("--complex", dest="complex_file")
    src.add_argument("--datum", dest="datum_file")
    h.add_argument("--json", action="store_true")

    r = sub.add_parser("rfh-lens", help="equivariant twisted RFH of a lens space")
    r.add_argument("--n", type=int, required=True)
    r.add_argument("--m", type=int, required=True)
    r.add_argument("--k", type=_ints, default=None, help="rotation exponents, e.g. 1,1")
    r.add_argument("--json", action="store_true")
    r.add_argument("--markdown", action="store_true")

    o = sub.add_parser("orbit", help="twisted Reeb orbits")
    osub = o.add_subparsers(dest="orbit_cmd", required=True, parser_class=_Parser)
    for name in ("shoot", "monodromy"):
        q = osub.add_parser(name)
        q.add_argument("--model", default="sphere", choices=["sphere", "ellipsoid", "star_shaped"])
        q.add_argument("--n", type=int, default=2)
        q.add_argument("--a", type=_floats, default=None, help="ellipsoid semi-axes")
        q.add_argument("--eps", type=float, default=0.1, help="star-shaped deformation size")
        q.add_argument("--m", type=int, default=1)
        q.add_argument("--k", type=_ints, default=None)
        q.add_argument("--seed-tau", type=float, required=True)
        q.add_argument("--seed-x", type=_floats, default=None)
        q.add_argument("--seed", type=int, default=0, help="RNG seed for the base point")
        q.add_argument("--max-iter", type=int, default=50)
        q.add_argument("--json", action="store_true")
    s = osub.add_parser("spectrum")
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--k-range", type=_range, default=range(0, 3))
    s.add_argument("--json", action="store_true")

    c = sub.add_parser("cz", help="Conley-Zehnder index of a path JSON")
    c.add_argument("--path", required=True)
    c.add_argument("--degenerate", action="store_true")
    c.add_argument("--json", action="store_true")

    t = sub.add_parser("torus", help="magnetic torus identities")
    tsub = t.add_subparsers(dest="torus_cmd", required=True, parser_class=_Parser)
    tc = tsub.add_parser("check")
    tc.add_argument("--c", type=float, required=True)
    tc.add_argument("--tau", type=float, required=True)
    tc.add_argument("--untwisted", action="store_true", help="check the untwisted closing conditions")
    tc.add_argument("--json", action="store_true")
    tf = tsub.add_parser("forcing")
    tf.add_argument("--c", type=float, required=True)
    tf.add_argument("--tau-minus", type=float, required=True)
    tf.add_argument("--tau-plus", type=float, required=True)
    tf.add_argument("--json", action="store_true")

    lf = sub.add_parser("lift", help="deck index of a loop in a sphere quotient")
    lf.add_argument("--loop", required=True, help="JSON list of phase points")
    lf.add_argument("--m", type=int, required=True)
    lf.add_argument("--k", type=_ints, default=None)
    lf.add_argument("--json", action="store_true")

    e = sub.add_parser("energy", help="displacement energy lookup")
    e.add_argument("--shape", required=True, choices=["ball", "torus"])
    e.add_argument("--r", type=float)
    e.add_argument("--c", type=float)
    e.add_argument("--json", action="store_true")

    f = sub.add_parser("flow", help="integrate a built-in model and export CSV")
    f.add_argument("--model", default="sphere", choices=["sphere", "magnetic_torus"])
    f.add_argument("--n", type=int, default=2)
    f.add_argument("--x0", type=_floats, required=True)
    f.add_argument("--T", type=float, required=True)
    f.add_argument("--dt", type=float, default=1e-3)
    f.add_argument("--c", type=float, default=0.5)
    f.add_argument("--csv", action="store_true")
    f.add_argument("--json", action="store_true")
    return p


def parse_config(argv: Sequence[str]) -> CommandConfig:
    args = build_parser().parse_args(list(argv))
    tol = args.tol
    if tol is None:
        env = os.environ.get("RFHKIT_TOL")
        try:
            tol = float(env) if env else DEFAULT_TOL
        except ValueError:
            raise UsageError(f"RFHKIT_TOL is not a number: {env!r}")
    if not tol > 0:
        raise UsageError("tolerance must be positive")
    output = "json" if getattr(args, "json", False) else "csv" if getattr(args, "csv", False) else "table"
    return CommandConfig(args.cmd, tol, output, args)


def _twist(n: int, m: int, ks) -> TwistSpec:
    ks = tuple(ks) if ks else (1,) * n
    if len(ks) != n:
        raise UsageError(f"--k needs {n} exponents")
    return TwistSpec.rotation(m, ks)


def _orbit(cfg: CommandConfig):
    a = cfg.args
    params = {"n": a.n, "eps": a.eps}
    if a.model == "ellipsoid":
        if a.a is None:
            raise UsageError("--a is required for the ellipsoid model")
        params = {"a": list(a.a)}
    sigma = hypersurface_from_spec(a.model, params)
    n = sigma.n
    tw = _twist(n, a.m, a.k)
    if a.seed_x is not None:
        x = np.array(a.seed_x, dtype=float)
        if len(x) != 2 * n:
            raise UsageError(f"--seed-x needs {2 * n} numbers")
    else:
        x = sigma.project(np.random.default_rng(a.seed).normal(size=2 * n))
    orbit = shoot(sigma, tw, x, a.seed_tau, tol=cfg.tol, max_iter=a.max_iter)
    return sigma, tw, orbit


def _cmd_homology(cfg: CommandConfig, out: TextIO) -> None:
    a = cfg.args
    if a.complex_file:
        c = GradedComplexZ2.from_json_obj(_read_json(a.complex_file))
    else:
        c = build_complex(MorseBottDatum.from_json_obj(_read_json(a.datum_file)))
    dims = homology_dims(c)
    if cfg.output == "json":
        _dump({str(k): v for k, v in dims.items()}, out)
    else:
        for k, v in dims.items():
            out.write(f"H_{k}: {v}\n")


def _cmd_rfh_lens(cfg: CommandConfig, out: TextIO) -> None:
    a = cfg.args
    dims = rfh_lens_homology(RfhSphereSpec(a.n, a.m, a.k))
    if cfg.output == "json":
        _dump({str(k): v for k, v in dims.items()}, out)
    elif a.markdown:
        out.write(dims_table(dims) + "\n")
    else:
        values = set(dims.values())
        if len(values) == 1:
            out.write(f"degree k: {values.pop()} (all k)\n")
        for k, v in dims.items():
            out.write(f"degree {k}: {v}\n")


def _cmd_orbit(cfg: CommandConfig, out: TextIO) -> None:
    a = cfg.args
    if a.orbit_cmd == "spectrum":
        taus = spectrum_sphere(a.m, list(a.k_range))
        if cfg.output == "json":
            _dump({"m": a.m, "spectrum": [{"k": k, "tau": t} for k, t in zip(a.k_range, taus)]}, out)
        else:
            for k, t in zip(a.k_range, taus):
                out.write(f"k={k}: tau = {fmt_angle(t)} ({fmt(t)})\n")
        return
    sigma, tw, orbit = _orbit(cfg)
    if a.orbit_cmd == "shoot":
        rep = orbit_report(orbit, sigma, tw)
        if cfg.output == "json":
            _dump(rep.to_json_obj(), out)
        else:
            out.write(f"tau: {fmt_angle(orbit.tau)} ({fmt(orbit.tau)})\n")
            out.write(f"residual: {orbit.residual:.3e}\n")
            out.write(f"action: {fmt(orbit.action)}\n")
            out.write(f"kernel_dim: {rep.kernel_dim}\n")
            out.write(f"deck_index: {rep.deck_index}\n")
            if rep.cz_index is not None:
                out.write(f"cz_index: {rep.cz_index}\n")
            out.write("x0: " + " ".join(fmt(v) for v in orbit.x0) + "\n")
        return
    kdim, M = monodromy_kernel(orbit, sigma, tw)
    dev = float(np.max(np.abs(M - np.eye(len(M)))))
    if cfg.output == "json":
        _dump({"tau": orbit.tau, "kernel_dim": kdim, "max_deviation_from_identity": dev,
               "monodromy": M.tolist()}, out)
    else:
        out.write(f"tau: {fmt_angle(orbit.tau)}\nkernel_dim: {kdim}\n|M - I|_max: {dev:.3e}\n")


def _cmd_cz(cfg: CommandConfig, out: TextIO) -> None:
    data = _read_json(cfg.args.path)
    path = SymplecticPath(np.array(data, dtype=float))
    idx = cz_index(path, degenerate=cfg.args.degenerate)
    if cfg.output == "json":
        _dump({"cz_index": idx, "degenerate": bool(cfg.args.degenerate), "samples": len(path)}, out)
    else:
        out.write(f"cz_index: {idx}\n")


def _cmd_torus(cfg: CommandConfig, out: TextIO) -> None:
    a = cfg.args
    if a.torus_cmd == "forcing":
        rep = forcing_gap(a.c, a.tau_minus, a.tau_plus)
        if cfg.output == "json":
            _dump({"gap": rep.gap, "e_sigma": rep.e_sigma, "satisfied": rep.satisfied}, out)
        else:
            out.write(f"gap: {fmt(rep.gap)}\ne_sigma: {fmt(rep.e_sigma)}\nsatisfied: {rep.satisfied}\n")
        return
    if not a.c > 0:
        raise RfhkitError("c must be positive")
    J = np.array([[0.0, 1.0], [-1.0, 0.0]])
    q, p = torus_family_state(a.c)
    L = None if a.untwisted else np.array([[0.0, 1.0], [-1.0, 0.0]])
    if a.untwisted:
        q, p = np.zeros(2), np.array([0.0, math.sqrt(2 * a.c)])
    res = magnetic_orbit_residuals(q, p, a.tau, a.c, J, L)
    ok = max(res) <= 1e-8
    if cfg.output == "json":
        _dump({"ok": ok, "residuals": list(res), "tau": a.tau, "c": a.c, "twisted": L is not None}, out)
    else:
        out.write(f"{'pass' if ok else 'fail'}: residuals " + " ".join(f"{r:.3e}" for r in res) + "\n")


def _cmd_lift(cfg: CommandConfig, out: TextIO) -> None:
    a = cfg.args
    pts = np.array(_read_json(a.loop), dtype=float)
    if pts.ndim != 2 or pts.shape[1] % 2:
        raise RfhkitError("loop must be a list of phase points of even dimension")
    tw = _twist(pts.shape[1] // 2, a.m, a.k)
    k = lift_loop(pts, tw)
    if cfg.output == "json":
        _dump({"deck_index": k, "m": a.m}, out)
    else:
        out.write(f"deck_index: {k}\n")


def _cmd_energy(cfg: CommandConfig, out: TextIO) -> None:
    a = cfg.args
    if a.shape == "ball":
        if a.r is None:
            raise UsageError("--r is required for --shape ball")
        val = displacement_energy(Ball(a.r))
    else:
        if a.c is None:
            raise UsageError("--c is required for --shape torus")
        val = displacement_energy(MagneticTorusLevel(a.c))
    if cfg.output == "json":
        _dump({"shape": a.shape, "energy": val}, out)
    else:
        out.write(fmt(val) + "\n")


def _cmd_flow(cfg: CommandConfig, out: TextIO) -> None:
    a = cfg.args
    params = {"n": a.n} if a.model == "sphere" else {"n": 2, "c": a.c}
    model = model_from_spec(a.model, params)
    x0 = np.array(a.x0, dtype=float)
    if len(x0) != model.dim:
        raise UsageError(f"--x0 needs {model.dim} numbers")
    tr = flow(model, x0, a.T, a.dt)
    if cfg.output == "csv":
        out.write(tr.to_csv())
    elif cfg.output == "json":
        _dump({"end": tr.end.tolist(), "energy_drift": tr.energy_drift, "steps": len(tr.times) - 1}, out)
    else:
        out.write("end: " + " ".join(fmt(v) for v in tr.end) + f"\nenergy_drift: {tr.energy_drift:.3e}\n")


COMMANDS = {
    "homology": _cmd_homology,
    "rfh-lens": _cmd_rfh_lens,
    "orbit": _cmd_orbit,
    "cz": _cmd_cz,
    "torus": _cmd_torus,
    "lift": _cmd_lift,
    "energy": _cmd_energy,
    "flow": _cmd_flow,
}


def run(argv: Sequence[str], out: TextIO | None = None, err: TextIO | None = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        cfg = parse_config(argv)
        COMMANDS[cfg.subcommand](cfg, out)
    except UsageError as exc:
        err.write(f"usage error: {exc}\n")
        return 1
    except RfhkitError as exc:
        err.write(f"error: {exc}\n")
        return 2
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    return 0


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
