"""Acceptance suite: one check per criterion, each printing a single PASS/FAIL line.

Run with ``pytest -s tests/test_acceptance.py`` or ``python3 tests/test_acceptance.py``.
"""
from __future__ import annotations

import functools
import io
import json
import math
import sys
import time
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from conftest import brute_force_homology, gf2_inverse  # noqa: E402
from test_sympindex import concatenation_case, loop_property_case  # noqa: E402

from rfhkit.cli import run  # noqa: E402
from rfhkit.gradient2d import cascade_datum_2d  # noqa: E402
from rfhkit.hamflow import (  # noqa: E402
    StarkZeeman,
    birkhoff,
    birkhoff_prime,
    closed_flow_sphere,
    complex_lift_real,
    fd_jacobian,
    flow,
    hypersurface_from_spec,
    lift_pullback_defect,
    sphere_flow_model,
)
from rfhkit.mbhomology import (  # noqa: E402
    RfhSphereSpec,
    build_complex,
    displayed_lens_complex,
    homology_of_datum,
    lens_quotient_complex,
    point_datum,
    rfh_sphere_complex,
    rope_ladder,
    sphere_datum,
    teapot_datum,
)
from rfhkit.sympindex import SymplecticPath, cz_index, sphere_orbit_path  # noqa: E402
from rfhkit.twistorbit import (  # noqa: E402
    TwistSpec,
    action_value,
    forcing_gap,
    lift_loop,
    magnetic_orbit_check,
    monodromy,
    monodromy_kernel,
    project_loop,
    shoot,
    torus_family_state,
)
from rfhkit.z2complex import GradedComplexZ2, Gf2Matrix, homology_dims, is_complex, periodic_homology_dims  # noqa: E402

J2 = np.array([[0.0, 1.0], [-1.0, 0.0]])
QUARTER = np.array([[0.0, 1.0], [-1.0, 0.0]])


def _line(num: int, ok: bool, detail: str) -> str:
    return f"criterion {num}: {'PASS' if ok else 'FAIL'} ({detail})"


# --------------------------------------------------------------------------
# criteria
# --------------------------------------------------------------------------


def criterion_1() -> tuple[bool, str]:
    worst, ok = 0.0, True
    for n in (2, 3):
        for m in range(1, 7):
            out, err = io.StringIO(), io.StringIO()
            t0 = time.perf_counter()
            code = run(["rfh-lens", "--n", str(n), "--m", str(m), "--json"], out, err)
            worst = max(worst, time.perf_counter() - t0)
            dims = json.loads(out.getvalue()) if code == 0 else {}
            want = 1 if m % 2 == 0 else 0
            ok &= code == 0 and bool(dims) and all(isinstance(v, int) and v == want for v in dims.values())
    ok &= worst < 1.0
    return ok, f"12 cases, slowest {worst:.3f}s"


def criterion_2() -> tuple[bool, str]:
    t0 = time.perf_counter()
    ok = homology_of_datum(teapot_datum()) == {0: 1, 1: 0, 2: 1}
    for n in (2, 3, 4):
        dims = homology_of_datum(sphere_datum(n))
        ok &= {k for k, v in dims.items() if v} == {0, 2 * n - 1} and all(v <= 1 for v in dims.values())
    elapsed = time.perf_counter() - t0
    t1 = time.perf_counter()
    numeric = homology_of_datum(cascade_datum_2d("teapot_profile")) == {0: 1, 1: 0, 2: 1}
    oracle = time.perf_counter() - t1
    return ok and numeric and elapsed < 1.0, f"homology {elapsed:.3f}s; numeric cascade oracle agrees={numeric} ({oracle:.2f}s)"


@functools.lru_cache(maxsize=None)
def _m2_orbits():
    sigma = hypersurface_from_spec("sphere", {"n": 2})
    tw = TwistSpec.rotation(2, (1, 1))
    rng = np.random.default_rng(2024)
    orbits, errors = [], []
    t0 = time.perf_counter()
    for _ in range(20):
        x = sigma.project(rng.normal(size=4))
        k = int(rng.integers(0, 4))
        seed_tau = math.pi / 2 * (2 * k - 1) + rng.uniform(-0.3, 0.3)
        try:
            orbits.append(shoot(sigma, tw, x, seed_tau))
        except Exception as exc:  # reported as a failure below
            errors.append(repr(exc))
    return sigma, tw, orbits, errors, time.perf_counter() - t0


def criterion_3() -> tuple[bool, str]:
    _, _, orbits, errors, elapsed = _m2_orbits()
    dist = [abs(o.tau - math.pi / 2 * (2 * round((o.tau / (math.pi / 2) + 1) / 2) - 1)) for o in orbits]
    res = [o.residual for o in orbits]
    ok = not errors and len(orbits) == 20 and max(dist) < 1e-8 and max(res) < 1e-9 and elapsed < 10.0
    return ok, f"{len(orbits)}/20 converged, max |tau - spectrum| {max(dist, default=0):.1e}, " \
               f"max residual {max(res, default=0):.1e}, {elapsed:.2f}s"


def criterion_4() -> tuple[bool, str]:
    sigma, _, orbits, _, _ = _m2_orbits()
    gaps = [abs(action_value(o, sigma) - o.tau) for o in orbits]
    return bool(orbits) and max(gaps) < 1e-6, f"max |action - tau| {max(gaps, default=0):.1e}"


def criterion_5() -> tuple[bool, str]:
    sigma, tw, orbits, _, _ = _m2_orbits()
    worst, kernels = 0.0, set()
    for o in orbits[:5]:
        # the Reeb flow lives on the hypersurface, so compare the return map on its tangent space
        _, M = monodromy(o, sigma, tw)
        worst = max(worst, float(np.linalg.norm(M - np.eye(len(M)))))
        kernels.add(monodromy_kernel(o, sigma, tw)[0])
    return bool(orbits) and worst < 1e-5 and kernels == {3}, f"max ||D - I|| on T(Sigma) {worst:.1e}, kernel dims {sorted(kernels)}"


def _closed_form_path(n: int, tau: float, samples: int = 65) -> SymplecticPath:
    model = sphere_flow_model(n)
    x0 = np.zeros(2 * n)
    x0[0] = 1.0
    return SymplecticPath.from_function(lambda t: fd_jacobian(lambda x: model.closed_flow(x, tau * t), x0), samples)


def criterion_6() -> tuple[bool, str]:
    tau = math.pi / 2  # k = 1 for the m = 2 twist
    assembled = cz_index(_closed_form_path(2, tau), degenerate=True)
    analytic = cz_index(sphere_orbit_path(2, 2, 1), degenerate=True)
    loops = [loop_property_case(s) for s in range(50)]
    concat = [concatenation_case(s) for s in range(50)]
    loop_ok = all(total == base + 2 * mu for total, base, mu in loops)
    concat_ok = all(total == first + rel for total, first, rel in concat)
    ok = assembled == 2 and analytic == 2 and loop_ok and concat_ok
    return ok, f"assembled cz {assembled}, analytic cz {analytic}, loop 50/50={loop_ok}, concatenation 50/50={concat_ok}"


def criterion_7() -> tuple[bool, str]:
    ok, worst = True, 0.0
    for c in (0.5, 1.0, 2.0):
        q, p = torus_family_state(c)
        for tau in (math.pi / 2, math.pi / 2 + 2 * math.pi):
            ok &= magnetic_orbit_check(q, p, tau, c, J2, L=QUARTER)
        rep = forcing_gap(c, math.pi / 2, math.pi / 2 + 2 * math.pi)
        worst = max(worst, abs(rep.gap - 2 * math.pi * c), abs(rep.gap - rep.e_sigma))
    return ok and worst < 1e-10, f"family checks {'pass' if ok else 'fail'}, max gap error {worst:.1e}"


def criterion_8() -> tuple[bool, str]:
    rng = np.random.default_rng(9)
    lift = complex_lift_real(birkhoff, birkhoff_prime)
    pull = 0.0
    for _ in range(100):
        x = np.concatenate([rng.uniform(0.4, 2.0, size=2) * rng.choice([-1, 1], size=2), rng.normal(size=2)])
        pull = max(pull, lift_pullback_defect(lift, x, rng.normal(size=4)))
    sz = StarkZeeman(0.7, 0.3, -1.4, V0=lambda q: 0.1 * q.real)
    kerr, done = 0.0, 0
    while done < 10:
        z = complex(*rng.uniform(-2, 2, size=2))
        if min(abs(z), abs(z - 1), abs(z + 1)) < 0.2:
            continue
        w = complex(*rng.normal(size=2))
        kerr = max(kerr, abs(sz.K_composed(z, w) - sz.K_closed(z, w)))
        done += 1
    return pull < 1e-9 and kerr < 1e-10, f"pullback defect {pull:.1e}, K mismatch {kerr:.1e}"


def criterion_9() -> tuple[bool, str]:
    rng = np.random.default_rng(1)
    x0 = rng.normal(size=4)
    x0 /= np.linalg.norm(x0)
    tr = flow(sphere_flow_model(2), x0, math.pi, 1e-3)
    err = float(np.linalg.norm(tr.end - closed_flow_sphere(x0, math.pi)))
    return err < 1e-6 and tr.energy_drift < 1e-9, f"endpoint error {err:.1e}, energy drift {tr.energy_drift:.1e}"


def criterion_10() -> tuple[bool, str]:
    sigma = hypersurface_from_spec("sphere", {"n": 2})
    rng = np.random.default_rng(10)
    bad = []
    for m in range(2, 6):
        for p in range(1, m):
            tw = TwistSpec.rotation(m, (1, 1), power=p)
            x = sigma.project(rng.normal(size=4))
            orbit = shoot(sigma, tw, x, math.pi * (1 - p / m) + 0.05)
            got = lift_loop(project_loop(orbit.trajectory.states, tw, rng), tw)
            if got != p:
                bad.append((m, p, got))
    const = [lift_loop(np.array([[0.6, 0.0, 0.0, 0.8]] * 10), TwistSpec.rotation(m, (1, 1))) for m in range(2, 6)]
    return not bad and const == [0] * 4, f"14 orbits, mismatches {bad}, constant loops {const}"


def _random_complex(rng: np.random.Generator, max_total: int = 12) -> GradedComplexZ2:
    """Sum of Z_2's and acyclic pairs hidden by a random change of basis."""
    length = int(rng.integers(1, 6))
    while True:
        hom = rng.integers(0, 3, size=length)
        pairs = rng.integers(0, 3, size=length - 1)
        dims = [int(hom[i] + (pairs[i] if i < length - 1 else 0) + (pairs[i - 1] if i > 0 else 0))
                for i in range(length)]
        if 0 < sum(dims) <= max_total:
            break
    bases = []
    for d in dims:
        while True:
            g = rng.integers(0, 2, size=(d, d))
            if d == 0 or _gf2_invertible(g):
                bases.append(g)
                break
    bds = {}
    for i in range(1, length):
        raw = np.zeros((dims[i - 1], dims[i]), dtype=int)
        tgt0, src0 = hom[i - 1], hom[i] + (pairs[i] if i < length - 1 else 0)
        for j in range(pairs[i - 1]):
            raw[tgt0 + j, src0 + j] = 1
        if dims[i] and dims[i - 1]:
            raw = (bases[i - 1] @ raw @ gf2_inverse(bases[i])) % 2
        bds[i] = Gf2Matrix.from_rows(raw.tolist(), cols=dims[i])
    return GradedComplexZ2(0, tuple(dims), bds)


def _gf2_invertible(g: np.ndarray) -> bool:
    try:
        inv = gf2_inverse(g)
    except StopIteration:
        return False
    return bool(np.array_equal((g @ inv) % 2, np.eye(len(g), dtype=int)))


def criterion_11() -> tuple[bool, str]:
    built = [build_complex(d) for d in (teapot_datum(), point_datum(), sphere_datum(2), sphere_datum(3))]
    built.append(build_complex(cascade_datum_2d("teapot_profile")))
    quotient_ok = True
    for n in (2, 3):
        for m in range(1, 7):
            spec = RfhSphereSpec(n, m)
            for pc in (rope_ladder(spec)[0], lens_quotient_complex(spec), rfh_sphere_complex(spec)):
                built.append(pc.window(*pc.middle_window()))
            q, shown = lens_quotient_complex(spec), displayed_lens_complex(m, n)
            quotient_ok &= q.block == shown.block and q.linking.to_list() == shown.linking.to_list()
            quotient_ok &= periodic_homology_dims(q) == periodic_homology_dims(shown)
    squares = all(is_complex(c) for c in built)
    rng = np.random.default_rng(11)
    small = [c for c in built if c.total_dim <= 12] + [_random_complex(rng) for _ in range(300)]
    brute = all(homology_dims(c) == brute_force_homology(c) for c in small)
    ok = squares and brute and quotient_ok
    return ok, f"d^2=0 on {len(built)} constructed, brute force on {len(small)} small, quotients match={quotient_ok}"


CRITERIA = {i: globals()[f"criterion_{i}"] for i in range(1, 12)}


# --------------------------------------------------------------------------
# pytest entry points
# --------------------------------------------------------------------------


@pytest.mark.parametrize("num", sorted(CRITERIA))
def test_criterion(num, capsys):
    ok, detail = CRITERIA[num]()
    with capsys.disabled():
        print("\n" + _line(num, ok, detail))
    assert ok, detail


if __name__ == "__main__":
    results = []
    for num, fn in CRITERIA.items():
        ok, detail = fn()
        results.append(ok)
        print(_line(num, ok, detail), flush=True)
    sys.exit(0 if all(results) else 1)
