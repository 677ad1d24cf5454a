"""Twisted closed Reeb orbits: shooting, action, monodromy, deck indices and torus identities."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
import scipy.integrate
import scipy.linalg

from rfhkit.errors import ConvergenceError, FlowError, LiftError, RfhkitError
from rfhkit.hamflow import (
    HypersurfaceModel,
    Sphere,
    Trajectory,
    closed_flow_magnetic_torus,
    fd_jacobian_rows,
    flow_map_many,
)
from rfhkit.sympindex import SymplecticPath, cz_index, from_complex_linear, rotation

log = logging.getLogger(__name__)

SOLVER_TOL = 1e-9
MAX_ITER = 50
SV_CUTOFF = 1e-10
KERNEL_TOL = 1e-6


@dataclass(frozen=True, eq=False)
class TwistSpec:
    """Linear twist ``generator ** power`` where ``generator`` has order ``order``."""

    order: int
    generator: np.ndarray
    power: int = 1
    label: str = "linear"

    def __post_init__(self):
        if self.order < 1:
            raise RfhkitError("order must be positive")
        g = np.asarray(self.generator, dtype=float)
        object.__setattr__(self, "generator", g)
        gm = np.linalg.matrix_power(g, self.order)
        if np.max(np.abs(gm - np.eye(len(g)))) > 1e-9:
            raise RfhkitError(f"generator does not have order dividing {self.order}")

    @classmethod
    def rotation(cls, m: int, ks: Sequence[int], power: int = 1) -> "TwistSpec":
        """``z_j -> exp(2 pi i k_j / m) z_j``."""
        g = from_complex_linear(np.diag(np.exp(2j * np.pi * np.asarray(ks) / m)))
        return cls(m, g, power, label=f"rotation m={m} k={tuple(int(k) for k in ks)}")

    @classmethod
    def cotangent_linear(cls, L, order: int, power: int = 1) -> "TwistSpec":
        """Cotangent lift ``(q, p) -> (Lq, L^{-T} p)`` of a linear base map."""
        L = np.asarray(L, dtype=float)
        n = len(L)
        g = np.zeros((2 * n, 2 * n))
        g[:n, :n] = L
        g[n:, n:] = np.linalg.inv(L).T
        return cls(order, g, power, label="cotangent lift")

    @classmethod
    def identity(cls, dim: int) -> "TwistSpec":
        return cls(1, np.eye(dim), 1, label="identity")

    @property
    def matrix(self) -> np.ndarray:
        return np.linalg.matrix_power(self.generator, self.power % self.order)

    def __call__(self, x) -> np.ndarray:
        return self.matrix @ np.asarray(x, dtype=float)

    def derivative(self, x=None) -> np.ndarray:
        return self.matrix

    def deck(self, x, j: int) -> np.ndarray:
        return np.linalg.matrix_power(self.generator, j % self.order) @ np.asarray(x, dtype=float)

    def with_power(self, p: int) -> "TwistSpec":
        return TwistSpec(self.order, self.generator, p, self.label)


@dataclass
class TwistedOrbit:
    x0: np.ndarray
    tau: float
    residual: float
    trajectory: Trajectory
    action: float = float("nan")
    history: list[float] = field(default_factory=list)

    def to_json_obj(self) -> dict:
        return {"x0": [float(v) for v in self.x0], "tau": float(self.tau), "residual": float(self.residual),
                "action": float(self.action)}


@dataclass
class OrbitReport:
    orbit: TwistedOrbit
    kernel_dim: int
    cz_index: int | None
    deck_index: int

    def to_json_obj(self) -> dict:
        out = self.orbit.to_json_obj()
        out.update(kernel_dim=self.kernel_dim, deck_index=self.deck_index, cz_index=self.cz_index)
        return out


def _orbit_trajectory(sigma: HypersurfaceModel, x0, tau: float, samples: int) -> Trajectory:
    ts = np.linspace(0.0, 1.0, samples)
    if sigma.base.closed_flow is not None:
        states = np.array([sigma.flow_map(x0, tau * t) for t in ts])
    else:
        states = [np.asarray(x0, dtype=float)]
        for a, b in zip(ts[:-1], ts[1:]):
            states.append(sigma.flow_map(states[-1], tau * (b - a), steps=max(4, 2000 // (samples - 1))))
        states = np.array(states)
    return Trajectory(tau * ts, states, np.array([sigma.H(s) for s in states]))


def _pinv_step(J: np.ndarray, f: np.ndarray, cutoff: float = SV_CUTOFF) -> np.ndarray:
    U, s, Vt = np.linalg.svd(J, full_matrices=False)
    keep = s > cutoff
    return -(Vt[keep].T @ ((U[:, keep].T @ f) / s[keep]))


def shoot(
    sigma: HypersurfaceModel,
    twist: TwistSpec,
    seed_x,
    seed_tau: float,
    tol: float = SOLVER_TOL,
    max_iter: int = MAX_ITER,
    fd_step: float = 1e-6,
    samples: int = 201,
) -> TwistedOrbit:
    """Gauss-Newton on ``(flow_tau(x) - phi(x), H(x), <x - seed, R(seed)>) = 0``."""
    xs = np.asarray(seed_x, dtype=float)
    if abs(sigma.H(xs)) >= 0.1:
        raise RfhkitError(f"seed is too far from the hypersurface (H = {sigma.H(xs):.3g})")
    if not math.isfinite(seed_tau):
        raise RfhkitError("seed period must be finite")
    Rs = sigma.reeb(xs)
    nr = np.linalg.norm(Rs)
    Rs = Rs / nr if nr > 0 else Rs
    dim = len(xs)

    g = twist.matrix

    def F_rows(V):
        X, taus = V[:, :dim], V[:, dim]
        ends = flow_map_many(sigma.base, X, taus)
        Hs = np.array([sigma.H(x) for x in X])
        return np.column_stack([ends - X @ g.T, Hs, (X - xs) @ Rs])

    F = lambda v: F_rows(v[None, :])[0]

    v = np.concatenate([xs, [float(seed_tau)]])
    f = F(v)
    history = [float(np.linalg.norm(f))]
    stalled = 0
    for _ in range(max_iter):
        if history[-1] < tol:
            break
        step = _pinv_step(fd_jacobian_rows(F_rows, v, fd_step), f)
        lam = 1.0
        while True:
            trial = v + lam * step
            ft = F(trial)
            if np.linalg.norm(ft) < history[-1] or lam < 1 / 64:
                break
            lam /= 2
        stalled = stalled + 1 if np.linalg.norm(ft) >= history[-1] else 0
        v, f = trial, ft
        history.append(float(np.linalg.norm(f)))
        if stalled >= 3:
            raise ConvergenceError(f"stalled at |F| = {history[-1]:.3e}", history)
    if history[-1] >= tol:
        raise ConvergenceError(f"no convergence in {max_iter} iterations (|F| = {history[-1]:.3e})", history)
    x0, tau = v[:dim], float(v[dim])
    residual = float(np.linalg.norm(sigma.flow_map(x0, tau) - twist(x0)))
    orbit = TwistedOrbit(x0, tau, residual, _orbit_trajectory(sigma, x0, tau, samples), history=history)
    orbit.action = action_value(orbit, sigma)
    log.debug("orbit tau=%.12g action=%.12g residual=%.3e", tau, orbit.action, residual)
    return orbit


def quadratic_tail_ok(history: Sequence[float], slack: float = 10.0, floor: float = 1e-12) -> bool:
    """Ratio test ``e2 <= slack * e1^3 / e0^2`` on the last three residuals above the rounding floor."""
    h = [e for e in history if e > floor]
    if len(h) < 3:
        return True
    e0, e1, e2 = h[-3:]
    if e0 == 0 or e1 == 0:
        return True
    return e2 <= slack * e1**3 / e0**2


def action_value(orbit: TwistedOrbit, sigma: HypersurfaceModel) -> float:
    """Simpson quadrature of ``lambda(tau X_H) - tau H`` over the unit time interval."""
    states = orbit.trajectory.states
    if orbit.tau == 0:
        return 0.0
    limit = sigma.mollifier.inner
    vals = []
    for s in states:
        if abs(sigma.collar(s)) > limit:
            raise FlowError("trajectory leaves the collar")
        vals.append(orbit.tau * (sigma.lam(s, sigma.reeb(s)) - sigma.H(s)))
    ts = np.linspace(0.0, 1.0, len(states))
    return float(scipy.integrate.simpson(np.array(vals), x=ts))


def spectrum_sphere(m: int, ks: Sequence[int]) -> list[float]:
    if m < 1:
        raise RfhkitError("m must be positive")
    return [math.pi / m * (m * k - 1) for k in ks]


def tangent_basis(sigma: HypersurfaceModel, x) -> np.ndarray:
    g = sigma.base.grad(np.asarray(x, dtype=float))
    return scipy.linalg.null_space(g[None, :])


def monodromy(orbit: TwistedOrbit, sigma: HypersurfaceModel, twist: TwistSpec, fd_step: float = 1e-6):
    """Full derivative of ``flow_{-tau} o phi`` at ``x0`` and its restriction to the tangent space."""
    g = twist.matrix
    G = lambda X: flow_map_many(sigma.base, X @ g.T, -orbit.tau)
    D = fd_jacobian_rows(G, orbit.x0, fd_step)
    B = tangent_basis(sigma, orbit.x0)
    return D, B.T @ D @ B


def monodromy_kernel(orbit: TwistedOrbit, sigma: HypersurfaceModel, twist: TwistSpec,
                     kernel_tol: float = KERNEL_TOL) -> tuple[int, np.ndarray]:
    _, M = monodromy(orbit, sigma, twist)
    scale = max(1.0, float(np.linalg.norm(M, 2)))
    sv = np.linalg.svd(M / scale - np.eye(len(M)) / scale, compute_uv=False)
    return int(np.sum(sv < kernel_tol)), M


def lift_loop(samples, twist: TwistSpec) -> int:
    """Deck index ``k`` such that the lift of a loop in the quotient ends at ``g^k(start)``."""
    pts = np.asarray(samples, dtype=float)
    m = twist.order
    if m == 1:
        return 0
    seps = []
    for y in pts:
        seps.append(min(np.linalg.norm(twist.deck(y, j) - y) for j in range(1, m)))
    half = 0.5 * min(seps)
    if half <= 1e-12:
        raise LiftError("action is not free along the loop")
    lift = pts[0]
    for y in pts[1:]:
        cands = [twist.deck(y, j) for j in range(m)]
        d = [np.linalg.norm(c - lift) for c in cands]
        j = int(np.argmin(d))
        if d[j] >= half:
            raise LiftError("sampling too coarse: nearest preimage is ambiguous")
        lift = cands[j]
    d = [np.linalg.norm(lift - twist.deck(pts[0], k)) for k in range(m)]
    k = int(np.argmin(d))
    if d[k] >= half:
        raise LiftError("samples do not close up in the quotient")
    return k


def project_loop(states, twist: TwistSpec, rng: np.random.Generator | None = None) -> np.ndarray:
    """Replace every sample by a random representative of its class in the quotient."""
    rng = rng or np.random.default_rng(0)
    return np.array([twist.deck(s, int(rng.integers(twist.order))) for s in states])


def sphere_cz(n: int, tau: float) -> int:
    """Index of ``t -> D flow_{tau t}`` on the round sphere (degenerate convention if needed)."""
    steps = max(65, int(abs(2 * tau) / 0.2) + 2)
    path = SymplecticPath.from_function(lambda t: rotation(2 * tau * t, n), steps)
    end = path.samples[-1]
    degenerate = np.linalg.svd(end - np.eye(2 * n), compute_uv=False)[-1] < 1e-8
    return cz_index(path, degenerate=degenerate)


def orbit_report(orbit: TwistedOrbit, sigma: HypersurfaceModel, twist: TwistSpec) -> OrbitReport:
    kdim, _ = monodromy_kernel(orbit, sigma, twist)
    cz = sphere_cz(sigma.n, orbit.tau) if isinstance(sigma.shape, Sphere) and orbit.tau != 0 else None
    deck = lift_loop(project_loop(orbit.trajectory.states, twist), twist)
    return OrbitReport(orbit, kdim, cz, deck)


# --------------------------------------------------------------------------
# magnetic torus
# --------------------------------------------------------------------------


def magnetic_orbit_residuals(q, p, tau: float, c: float, J, L=None) -> tuple[float, float, float]:
    q = np.asarray(q, dtype=float)
    p = np.asarray(p, dtype=float)
    J = np.asarray(J, dtype=float)
    E = scipy.linalg.expm(tau * J)
    if L is None:
        basis = scipy.linalg.orth(J)
        par = basis @ (basis.T @ p)
        perp = p - par
        return (float(np.linalg.norm(perp)), float(np.linalg.norm(E @ par - par)),
                abs(float(par @ par) - 2 * c))
    L = np.asarray(L, dtype=float)
    qn, pn = closed_flow_magnetic_torus(q, p, tau, J, reduce=False)
    return (float(np.linalg.norm(qn - L @ q)), float(np.linalg.norm(pn - np.linalg.inv(L).T @ p)),
            abs(float(p @ p) - 2 * c))


def magnetic_orbit_check(q, p, tau: float, c: float, J, L=None, tol: float = 1e-8) -> bool:
    """Closing conditions of a contractible (twisted when ``L`` is given) characteristic."""
    return max(magnetic_orbit_residuals(q, p, tau, c, J, L)) <= tol


def torus_family_state(c: float, t: float = 0.0) -> tuple[np.ndarray, np.ndarray]:
    """``sqrt(2c) (sin t, cos t, cos t, -sin t)`` split into ``(q, p)``."""
    v = math.sqrt(2 * c) * np.array([math.sin(t), math.cos(t), math.cos(t), -math.sin(t)])
    return v[:2], v[2:]


def omega_energy(c: float, tau: float) -> float:
    return c * tau


@dataclass(frozen=True)
class ForcingReport:
    gap: float
    e_sigma: float
    satisfied: bool


def forcing_gap(c: float, tau_minus: float, tau_plus: float) -> ForcingReport:
    if not c > 0:
        raise RfhkitError("c must be positive")
    gap = omega_energy(c, tau_plus) - omega_energy(c, tau_minus)
    e = displacement_energy(MagneticTorusLevel(c))
    return ForcingReport(gap, e, gap <= e + 1e-12)


@dataclass(frozen=True)
class Ball:
    r: float


@dataclass(frozen=True)
class MagneticTorusLevel:
    c: float


def displacement_energy(shape) -> float:
    if isinstance(shape, Ball):
        if not shape.r > 0:
            raise RfhkitError("radius must be positive")
        return math.pi * shape.r**2
    if isinstance(shape, MagneticTorusLevel):
        if not shape.c > 0:
            raise RfhkitError("energy level must be positive")
        return 2 * math.pi * shape.c
    raise RfhkitError(f"unsupported shape {shape!r}")


__all__ = [
    "Ball", "ForcingReport", "MagneticTorusLevel", "OrbitReport", "TwistSpec", "TwistedOrbit",
    "action_value", "displacement_energy", "forcing_gap", "lift_loop",
    "magnetic_orbit_check", "magnetic_orbit_residuals", "monodromy", "monodromy_kernel", "omega_energy",
    "orbit_report", "project_loop", "quadratic_tail_ok", "shoot", "spectrum_sphere", "sphere_cz",
    "tangent_basis", "torus_family_state",
]
