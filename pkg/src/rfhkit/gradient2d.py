"""Mod-2 counts of gradient lines for height functions on surfaces in R^3.

Used as an independent numerical check of the hand-supplied cascade data.
A surface is ``{F = 0}`` and the function is ``f(x) = <c, x>`` for a fixed
direction ``c``.  Between points of adjacent index the isolated lines are
separatrices of the saddle involved, so each count follows the two
separatrices of that saddle (descending ones for saddle -> minimum, ascending
ones for maximum -> saddle) and records where they land.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from rfhkit.errors import FlowError, RfhkitError
from rfhkit.mbhomology import Component, MorseBottDatum, MorsePoint


@dataclass(frozen=True)
class CriticalPoint:
    label: str
    x: np.ndarray
    index: int
    eigvecs: np.ndarray  # tangent eigenvectors of the constrained Hessian, ascending eigenvalues


@dataclass(frozen=True, eq=False)
class Surface2D:
    name: str
    F: Callable[[np.ndarray], float]
    gradF: Callable[[np.ndarray], np.ndarray]
    hessF: Callable[[np.ndarray], np.ndarray]
    direction: np.ndarray
    seeds: tuple[tuple[str, tuple[float, float, float]], ...]

    def critical_points(self) -> dict[str, CriticalPoint]:
        return {lab: _refine(self, lab, np.array(s, dtype=float)) for lab, s in self.seeds}

    def tangent_field(self, x: np.ndarray) -> np.ndarray:
        g = self.gradF(x)
        nrm = g / np.linalg.norm(g)
        return self.direction - nrm * float(nrm @ self.direction)

    def project(self, x: np.ndarray) -> np.ndarray:
        for _ in range(20):
            g = self.gradF(x)
            v = self.F(x)
            x = x - v * g / float(g @ g)
            if abs(v) < 1e-13:
                break
        return x


def _refine(s: Surface2D, label: str, x: np.ndarray) -> CriticalPoint:
    """Newton on ``c - lam grad F = 0, F = 0``."""
    g0 = s.gradF(x)
    lam = float(g0 @ s.direction / (g0 @ g0))
    for _ in range(50):
        g = s.gradF(x)
        res = np.concatenate([s.direction - lam * g, [s.F(x)]])
        if np.linalg.norm(res) < 1e-13:
            break
        J = np.zeros((4, 4))
        J[:3, :3] = -lam * s.hessF(x)
        J[:3, 3] = -g
        J[3, :3] = g
        step = np.linalg.solve(J, -res)
        x, lam = x + step[:3], lam + step[3]
    else:
        raise FlowError(f"critical point {label} did not converge")
    g = s.gradF(x)
    n = g / np.linalg.norm(g)
    basis = np.linalg.svd(n[None, :])[2][1:].T
    hess = basis.T @ (-lam * s.hessF(x)) @ basis
    w, v = np.linalg.eigh(hess)
    if np.min(np.abs(w)) < 1e-8:
        raise FlowError(f"critical point {label} is degenerate")
    return CriticalPoint(label, x, int(np.sum(w < 0)), basis @ v)


def _follow(s: Surface2D, x: np.ndarray, sign: float, crit: dict[str, CriticalPoint],
            ds: float = 2e-3, capture: float = 5e-3, max_steps: int = 50000) -> str:
    """Run the normalised (sign * gradient) flow until it arrives at a critical point."""
    def field(y):
        v = sign * s.tangent_field(y)
        nv = np.linalg.norm(v)
        return v / nv if nv > 0 else v

    origin = x.copy()
    left = False
    for _ in range(max_steps):
        left = left or np.linalg.norm(x - origin) > 2 * capture
        for lab, c in crit.items():
            if np.linalg.norm(x - c.x) < capture and (left or np.linalg.norm(origin - c.x) >= capture):
                return lab
        k1 = field(x)
        k2 = field(x + 0.5 * ds * k1)
        k3 = field(x + 0.5 * ds * k2)
        k4 = field(x + ds * k3)
        x = s.project(x + ds / 6 * (k1 + 2 * k2 + 2 * k3 + k4))
    raise FlowError("gradient line did not arrive at a critical point")


def count_cascades_2d(model: Surface2D | str, source: str, target: str, offset: float = 1e-3) -> int:
    """Mod-2 number of negative gradient lines from ``source`` to ``target``."""
    s = builtin_surface(model) if isinstance(model, str) else model
    crit = s.critical_points()
    if source not in crit or target not in crit:
        raise RfhkitError(f"unknown critical point {source!r} or {target!r}")
    if source == target:
        return 0
    a, b = crit[source], crit[target]
    if a.index != b.index + 1:
        return 0
    if a.index == 1:
        saddle, sign, other = a, -1.0, target
        direction = a.eigvecs[:, 0]
        want = 0
    else:
        saddle, sign, other = b, +1.0, source
        direction = b.eigvecs[:, 1]
        want = 2
    count = 0
    for eps in (offset, -offset):
        start = s.project(saddle.x + eps * direction)
        arrived = _follow(s, start, sign, crit)
        if crit[arrived].index != want:
            raise FlowError(f"separatrix of {saddle.label} ends at {arrived}: resolution insufficient")
        count += arrived == other
    return count % 2


def cascade_datum_2d(model: Surface2D | str) -> MorseBottDatum:
    """Morse datum of a surface with every adjacent-index count computed numerically."""
    s = builtin_surface(model) if isinstance(model, str) else model
    crit = s.critical_points()
    comps = tuple(Component(lab, float(s.direction @ c.x), c.index) for lab, c in crit.items())
    pts = tuple(MorsePoint(lab, "pt", 0) for lab in crit)
    cas = {}
    for a in crit.values():
        for b in crit.values():
            if a.index == b.index + 1:
                cas[(f"{a.label}.pt", f"{b.label}.pt")] = count_cascades_2d(s, a.label, b.label)
    return MorseBottDatum(comps, pts, cas)


# --------------------------------------------------------------------------
# built-ins
# --------------------------------------------------------------------------


def round_sphere() -> Surface2D:
    return Surface2D(
        "sphere",
        F=lambda x: float(x @ x) - 1.0,
        gradF=lambda x: 2 * x,
        hessF=lambda x: 2 * np.eye(3),
        direction=np.array([0.0, 0.0, 1.0]),
        seeds=(("max", (0.0, 0.0, 1.0)), ("min", (0.0, 0.0, -1.0))),
    )


def teapot_profile(tilt: float = 0.15, a: float = 0.3) -> Surface2D:
    """Dumbbell ``y^2 + z^2 = (1 - x^2)(a + x^2)`` with height ``z + tilt * x``.

    The tilt breaks the left-right symmetry so that no line joins two
    saddles; the remaining ``y -> -y`` symmetry pairs up the separatrices
    that must cancel mod 2.
    """

    def F(x):
        return x[1] ** 2 + x[2] ** 2 - (1 - x[0] ** 2) * (a + x[0] ** 2)

    def gradF(x):
        u = x[0]
        return np.array([-2 * (1 - a) * u + 4 * u**3, 2 * x[1], 2 * x[2]])

    def hessF(x):
        u = x[0]
        return np.diag([-2 * (1 - a) + 12 * u * u, 2.0, 2.0])

    b = np.sqrt((1 - a) / 2)
    r_b = np.sqrt((1 - b * b) * (a + b * b))
    r_0 = np.sqrt(a)
    seeds = (
        ("max.left", (-b, 0.0, r_b)), ("max.right", (b, 0.0, r_b)),
        ("saddle.top", (0.0, 0.0, r_0)), ("saddle.bottom", (0.0, 0.0, -r_0)),
        ("min.left", (-b, 0.0, -r_b)), ("min.right", (b, 0.0, -r_b)),
    )
    return Surface2D("teapot_profile", F, gradF, hessF, np.array([tilt, 0.0, 1.0]), seeds)


def builtin_surface(name: str) -> Surface2D:
    if name == "sphere":
        return round_sphere()
    if name == "teapot_profile":
        return teapot_profile()
    raise RfhkitError(f"unknown surface {name!r}")


TEAPOT_ORDER: Sequence[tuple[str, str]] = (
    ("max.left", "max.right"), ("saddle.top", "saddle.bottom"), ("min.left", "min.right"),
)


def teapot_matrices() -> tuple[list[list[int]], list[list[int]]]:
    """Boundary matrices in the generator order ``TEAPOT_ORDER`` (degree 2, 1, 0)."""
    s = teapot_profile()
    top, mid, low = TEAPOT_ORDER
    d2 = [[count_cascades_2d(s, src, dst) for src in top] for dst in mid]
    d1 = [[count_cascades_2d(s, src, dst) for src in mid] for dst in low]
    return d2, d1


__all__ = [
    "CriticalPoint", "Surface2D", "builtin_surface", "cascade_datum_2d", "count_cascades_2d",
    "round_sphere", "teapot_matrices", "teapot_profile",
]
