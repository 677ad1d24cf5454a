"""Hamiltonian models, flows, defining Hamiltonians and cotangent lifts.

Phase points are real vectors ``(x, y)`` (or ``(q, p)``) of length ``2n``.
The sign convention is ``i_{X_H} omega = -dH`` with ``omega = dy ^ dx``,
which gives ``X_H = (dH/dp, -dH/dq)`` and turns ``|z|^2`` into the generator
of ``z -> exp(-2it) z``.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence, Union

import numpy as np
import scipy.linalg

from rfhkit.errors import ConvergenceError, FlowError, RfhkitError
from rfhkit.sympindex import complex_structure

FD_STEP = 1e-6
TOL_GRAD = 1e-6
NEWTON_TOL = 1e-12
NEWTON_MAX = 50

Vector = np.ndarray
ScalarField = Callable[[np.ndarray], float]
VectorField = Callable[[np.ndarray], np.ndarray]


def to_complex(x: Sequence[float]) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    n = x.shape[-1] // 2
    return x[..., :n] + 1j * x[..., n:]


def to_real(z: Sequence[complex]) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    return np.concatenate([z.real, z.imag], axis=-1)


def fd_gradient(f: ScalarField, x: np.ndarray, step: float = FD_STEP) -> np.ndarray:
    """Central differences with a relative step."""
    x = np.asarray(x, dtype=float)
    g = np.empty_like(x)
    for i in range(len(x)):
        h = step * max(1.0, abs(x[i]))
        e = np.zeros_like(x)
        e[i] = h
        g[i] = (f(x + e) - f(x - e)) / (2 * h)
    return g


def fd_jacobian(F: VectorField, x: np.ndarray, step: float = FD_STEP) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    cols = []
    for i in range(len(x)):
        h = step * max(1.0, abs(x[i]))
        e = np.zeros_like(x)
        e[i] = h
        cols.append((np.asarray(F(x + e)) - np.asarray(F(x - e))) / (2 * h))
    return np.stack(cols, axis=-1)


def fd_jacobian_rows(F: Callable[[np.ndarray], np.ndarray], x: np.ndarray, step: float = FD_STEP) -> np.ndarray:
    """Same differences as ``fd_jacobian`` with every probe passed to ``F`` in one batch of rows."""
    x = np.asarray(x, dtype=float)
    h = step * np.maximum(1.0, np.abs(x))
    E = np.diag(h)
    vals = np.asarray(F(np.vstack([x + E, x - E])))
    d = len(x)
    return ((vals[:d] - vals[d:]) / (2 * h[:, None])).T


# --------------------------------------------------------------------------
# models
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Standard:
    pass


@dataclass(frozen=True)
class Magnetic:
    """Magnetic term ``sigma_ij(q) dq_i ^ dq_j`` given as a constant matrix or a field of matrices."""

    sigma: Union[np.ndarray, Callable[[np.ndarray], np.ndarray]]

    def at(self, q: np.ndarray) -> np.ndarray:
        s = self.sigma(q) if callable(self.sigma) else self.sigma
        s = np.asarray(s, dtype=float)
        if np.max(np.abs(s + s.T)) > 1e-12:
            raise RfhkitError("magnetic term must be antisymmetric")
        return s


@dataclass(frozen=True)
class HamiltonianModel:
    dim: int
    H: ScalarField
    gradH: VectorField | None = None
    structure: Standard | Magnetic = field(default_factory=Standard)
    closed_flow: Callable[[np.ndarray, float], np.ndarray] | None = None
    name: str = "custom"
    batch_gradH: Callable[[np.ndarray], np.ndarray] | None = None  # rows are points

    def __post_init__(self):
        if self.dim <= 0 or self.dim % 2:
            raise RfhkitError(f"phase-space dimension must be even and positive, got {self.dim}")

    @property
    def n(self) -> int:
        return self.dim // 2

    def grad(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if self.gradH is not None:
            return np.asarray(self.gradH(x), dtype=float)
        return fd_gradient(self.H, x)

    def gradient_mismatch(self, x: np.ndarray) -> float:
        """Distance between the analytic gradient and central differences (0 without one)."""
        if self.gradH is None:
            return 0.0
        return float(np.max(np.abs(self.grad(x) - fd_gradient(self.H, np.asarray(x, float)))))


def hamiltonian_vector_field(model: HamiltonianModel, x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape != (model.dim,):
        raise FlowError(f"point of shape {x.shape} for a model of dimension {model.dim}")
    g = model.grad(x)
    if not np.all(np.isfinite(g)):
        raise FlowError("gradient unavailable at this point")
    n = model.n
    if isinstance(model.structure, Magnetic):
        Hq, Hp = g[:n], g[n:]
        sigma = model.structure.at(x[:n])
        return np.concatenate([Hp, sigma @ Hp - Hq])
    return np.concatenate([g[n:], -g[:n]])  # J0 g


@dataclass
class Trajectory:
    times: np.ndarray
    states: np.ndarray
    energies: np.ndarray

    @property
    def energy_drift(self) -> float:
        return float(np.max(np.abs(self.energies - self.energies[0])))

    @property
    def end(self) -> np.ndarray:
        return self.states[-1]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        d = self.states.shape[1]
        w.writerow(["t"] + [f"x{i}" for i in range(d)] + ["H"])
        for t, s, e in zip(self.times, self.states, self.energies):
            w.writerow([f"{t:.12g}"] + [f"{v:.12g}" for v in s] + [f"{e:.12g}"])
        return buf.getvalue()


def drift_budget(dt: float, T: float, C: float) -> float:
    return C * dt**4 * abs(T)


def flow(model: HamiltonianModel, x0: np.ndarray, T: float, dt: float = 1e-3, bound: float = 1e8) -> Trajectory:
    """Fixed-step RK4; the last step is shortened so the trajectory ends exactly at ``T``."""
    if not dt > 0:
        raise FlowError("dt must be positive")
    if not math.isfinite(T):
        raise FlowError("T must be finite")
    x = np.asarray(x0, dtype=float).copy()
    steps = int(math.ceil(abs(T) / dt - 1e-12)) if T else 0
    h = T / steps if steps else 0.0
    times = [0.0]
    states = [x.copy()]
    f = lambda y: hamiltonian_vector_field(model, y)
    for i in range(steps):
        k1 = f(x)
        k2 = f(x + 0.5 * h * k1)
        k3 = f(x + 0.5 * h * k2)
        k4 = f(x + h * k3)
        x = x + h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
        if not np.all(np.isfinite(x)) or np.linalg.norm(x) > bound:
            raise FlowError(f"blow-up at t={(i + 1) * h:.6g}")
        times.append((i + 1) * h)
        states.append(x.copy())
    states = np.array(states)
    energies = np.array([model.H(s) for s in states])
    return Trajectory(np.array(times), states, energies)


def flow_map(model: HamiltonianModel, x: np.ndarray, t: float, steps: int = 2000) -> np.ndarray:
    """Endpoint of the time-``t`` flow, closed form when the model has one."""
    if model.closed_flow is not None:
        return np.asarray(model.closed_flow(np.asarray(x, float), t), dtype=float)
    if t == 0:
        return np.asarray(x, dtype=float).copy()
    return flow(model, x, t, dt=abs(t) / steps).end


def flow_map_many(model: HamiltonianModel, X: np.ndarray, ts, steps: int = 2000) -> np.ndarray:
    """Row-wise ``flow_map``; rows are integrated together when the model has a batched gradient."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    ts = np.broadcast_to(np.asarray(ts, dtype=float), (len(X),))
    if model.closed_flow is not None or model.batch_gradH is None or isinstance(model.structure, Magnetic):
        return np.array([flow_map(model, x, t, steps) for x, t in zip(X, ts)])
    n = model.n
    h = (ts / steps)[:, None]

    def f(Y):
        G = model.batch_gradH(Y)
        return np.concatenate([G[:, n:], -G[:, :n]], axis=1)

    Y = X.copy()
    for _ in range(steps):
        k1 = f(Y)
        k2 = f(Y + 0.5 * h * k1)
        k3 = f(Y + 0.5 * h * k2)
        k4 = f(Y + h * k3)
        Y = Y + h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
    if not np.all(np.isfinite(Y)):
        raise FlowError("blow-up in batched flow")
    return Y


# --------------------------------------------------------------------------
# closed forms
# --------------------------------------------------------------------------


def closed_flow_sphere(z, t: float, tol: float = 1e-9):
    """``exp(-2it) z`` for ``z`` on the unit sphere (complex array or real ``(x, y)`` vector)."""
    real = np.isrealobj(z)
    zc = to_complex(z) if real else np.asarray(z, dtype=complex)
    if abs(np.linalg.norm(zc) - 1.0) > tol:
        raise FlowError(f"point is off the unit sphere (|z| = {np.linalg.norm(zc):.12g})")
    out = np.exp(-2j * t) * zc
    return to_real(out) if real else out


def magnetic_integral(J: np.ndarray, t: float) -> np.ndarray:
    """``int_0^t exp(sJ) ds`` for antisymmetric ``J``, block by block in real Schur form."""
    J = np.asarray(J, dtype=float)
    T, Q = scipy.linalg.schur(J, output="real")
    n = J.shape[0]
    B = np.zeros((n, n))
    i = 0
    while i < n:
        if i + 1 < n and abs(T[i + 1, i]) > 1e-14:
            a, b = T[i, i + 1], T[i + 1, i]
            w = math.sqrt(max(-a * b, 0.0))
            # block [[0, a], [b, 0]] with a*b = -w^2 (diagonal is zero for antisymmetric J)
            c, s = math.cos(w * t), math.sin(w * t)
            if w * abs(t) < 1e-8:
                blk = np.array([[t, a * t * t / 2], [b * t * t / 2, t]])
            else:
                blk = np.array([[s / w, a * (1 - c) / w**2], [b * (1 - c) / w**2, s / w]])
            B[i:i + 2, i:i + 2] = blk
            i += 2
        else:
            B[i, i] = t
            i += 1
    return Q @ B @ Q.T


def closed_flow_magnetic_torus(q, p, t: float, J, reduce: bool = True) -> tuple[np.ndarray, np.ndarray]:
    q = np.asarray(q, dtype=float)
    p = np.asarray(p, dtype=float)
    J = np.asarray(J, dtype=float)
    qn = magnetic_integral(J, t) @ p + q
    pn = scipy.linalg.expm(t * J) @ p
    if reduce:
        qn = np.mod(qn, 1.0)
    return qn, pn


# --------------------------------------------------------------------------
# cotangent lifts
# --------------------------------------------------------------------------


def cotangent_lift(phi: Callable, dphi: Callable, q, p) -> tuple[np.ndarray, np.ndarray]:
    """``(phi(q), p o Dphi(q)^{-1})`` with ``p`` read as a row vector."""
    q = np.asarray(q, dtype=float)
    D = np.asarray(dphi(q), dtype=float)
    if abs(np.linalg.det(D)) < 1e-14:
        raise RfhkitError("singular Jacobian")
    return np.asarray(phi(q), dtype=float), np.linalg.solve(D.T, np.asarray(p, dtype=float))


def holomorphic_lift(f: Callable, fprime: Callable, z: complex, w: complex) -> tuple[complex, complex]:
    """Cotangent lift of a holomorphic map; covectors ``w`` act by ``v -> Re(conj(w) v)``."""
    d = fprime(z)
    if d == 0:
        raise RfhkitError("derivative vanishes")
    return f(z), w / np.conj(d)


def birkhoff(z):
    return 0.5 * (z + 1.0 / z)


def birkhoff_prime(z):
    return 0.5 * (1.0 - 1.0 / z**2)


def birkhoff_lift(z: complex, w: complex) -> tuple[complex, complex]:
    return holomorphic_lift(birkhoff, birkhoff_prime, z, w)


def canonical_form(x: np.ndarray, v: np.ndarray) -> float:
    """``(p dq)(v)`` at the phase point ``x = (q, p)``."""
    n = len(x) // 2
    return float(np.dot(x[n:], v[:n]))


def lift_pullback_defect(lift: VectorField, x: np.ndarray, v: np.ndarray, step: float = 1e-6) -> float:
    """``|(lift^* p dq)(v) - (p dq)(v)|`` with the push-forward taken by central differences."""
    dv = (lift(x + step * v) - lift(x - step * v)) / (2 * step)
    return abs(canonical_form(lift(x), dv) - canonical_form(x, v))


def complex_lift_real(f: Callable, fprime: Callable) -> VectorField:
    """Real ``(q1, q2, p1, p2)`` version of a holomorphic cotangent lift."""

    def lift(x):
        q, p = holomorphic_lift(f, fprime, complex(x[0], x[1]), complex(x[2], x[3]))
        return np.array([q.real, q.imag, p.real, p.imag])

    return lift


@dataclass(frozen=True)
class StarkZeeman:
    """Planar mechanical system with two attracting centres at ``q = +-1`` (Euclidean metric).

    The centre with mass ``mu_plus`` sits at ``q = +1``.
    """

    mu_plus: float
    mu_minus: float
    c: float
    V0: Callable[[complex], float] = lambda q: 0.0

    def potential(self, q: complex) -> float:
        return -self.mu_plus / abs(q - 1) - self.mu_minus / abs(q + 1) + self.V0(q)

    def H(self, q: complex, p: complex) -> float:
        return 0.5 * abs(p) ** 2 + self.potential(q)

    def K_composed(self, z: complex, w: complex) -> float:
        """Rescaled ``|B'(z)|^2 (H o DB^dagger - c)``."""
        q, p = birkhoff_lift(z, w)
        return abs(birkhoff_prime(z)) ** 2 * (self.H(q, p) - self.c)

    def K_closed(self, z: complex, w: complex) -> float:
        q = birkhoff(z)
        az = abs(z)
        return (abs(w) ** 2 / 2
                - self.mu_plus * abs(z + 1) ** 2 / (2 * az**3)
                - self.mu_minus * abs(z - 1) ** 2 / (2 * az**3)
                + (self.V0(q) - self.c) * abs(z * z - 1) ** 2 / (4 * az**4))


# --------------------------------------------------------------------------
# defining Hamiltonians
# --------------------------------------------------------------------------


def _smoothstep(u):
    return u**3 * (10 - 15 * u + 6 * u**2)


def _smoothstep_integral(u):
    return u**6 - 3 * u**5 + 2.5 * u**4


@dataclass(frozen=True)
class MollifiedH:
    """Odd, nondecreasing cut-off ``h`` with ``h(r) = r`` near 0 and ``h = +-delta/2`` far out."""

    delta: float = 1.0

    def __post_init__(self):
        if not self.delta > 0:
            raise RfhkitError("delta must be positive")

    @property
    def margin(self) -> float:
        return self.delta / 20

    @property
    def inner(self) -> float:
        return self.delta / 2 - self.margin

    def h(self, r: float) -> float:
        a, mu = self.inner, self.margin
        s = abs(r)
        if s <= a:
            return float(r)
        u = min((s - a) / (2 * mu), 1.0)
        return math.copysign(a + 2 * mu * (u - _smoothstep_integral(u)), r)

    def dh(self, r: float) -> float:
        a, mu = self.inner, self.margin
        s = abs(r)
        if s <= a:
            return 1.0
        u = min((s - a) / (2 * mu), 1.0)
        return 1.0 - _smoothstep(u)

    def dh_array(self, r: np.ndarray) -> np.ndarray:
        u = np.clip((np.abs(r) - self.inner) / (2 * self.margin), 0.0, 1.0)
        return 1.0 - _smoothstep(u)


@dataclass(frozen=True)
class Sphere:
    n: int


@dataclass(frozen=True)
class Ellipsoid:
    a: tuple[float, ...]

    @property
    def n(self) -> int:
        return len(self.a)


@dataclass(frozen=True)
class RadiusFunction:
    """Star-shaped hypersurface ``{rho(u) u : |u| = 1}``; ``rho`` takes a real unit vector.

    With ``vectorized`` set, ``rho`` and ``grad_rho`` also accept a stack of
    unit vectors (one per row), which lets RK4 integrate many points at once.
    """

    n: int
    rho: Callable[[np.ndarray], float]
    grad_rho: Callable[[np.ndarray], np.ndarray] | None = None
    rotation_invariant: bool = False
    vectorized: bool = False


@dataclass(frozen=True)
class LevelSet:
    """Star-shaped hypersurface ``{F = 0}`` with ``F < 0`` near the origin."""

    n: int
    F: Callable[[np.ndarray], float]


Shape = Union[Sphere, Ellipsoid, RadiusFunction, LevelSet]


def quartic_radius(n: int, eps: float, weights: Sequence[float] | None = None) -> RadiusFunction:
    """``rho(u) = 1 + eps sum_j w_j |u_j|^4``, invariant under diagonal unitary maps."""
    w = np.ones(n) if weights is None else np.asarray(weights, dtype=float)

    def rho(u):
        a = u[..., :n] ** 2 + u[..., n:] ** 2
        return 1.0 + eps * np.sum(w * a * a, axis=-1)

    def grad_rho(u):
        a = u[..., :n] ** 2 + u[..., n:] ** 2
        c = 4 * eps * w * a
        return np.concatenate([c * u[..., :n], c * u[..., n:]], axis=-1)

    return RadiusFunction(n, rho, grad_rho, rotation_invariant=True, vectorized=True)


def _collar_functions(shape: Shape):
    """Return ``(r, grad r)``: ``r(x) = 2 log s`` where ``x / s`` lies on the hypersurface."""
    if isinstance(shape, Sphere):
        return (lambda x: math.log(float(x @ x)), lambda x: 2 * x / float(x @ x))
    if isinstance(shape, Ellipsoid):
        inv = 1.0 / np.tile(np.asarray(shape.a, dtype=float) ** 2, 2)
        G = lambda x: float(np.dot(inv, x * x))
        return (lambda x: math.log(G(x)), lambda x: 2 * inv * x / G(x))
    if isinstance(shape, RadiusFunction):
        def r(x):
            nx = math.sqrt(float(x @ x))
            rho = shape.rho(x / nx)
            if not rho > 0:
                raise RfhkitError("radius function must be positive")
            return 2 * math.log(nx) - 2 * math.log(rho)

        def gr(x):
            nx = math.sqrt(float(x @ x))
            u = x / nx
            g = shape.grad_rho(u) if shape.grad_rho is not None else fd_gradient(shape.rho, u)
            tangential = g - u * float(u @ g)
            return 2 * x / nx**2 - 2 * tangential / (shape.rho(u) * nx)

        return r, gr
    if isinstance(shape, LevelSet):
        def r(x):
            return 2 * _level_set_log_scale(shape.F, np.asarray(x, dtype=float))

        return r, None
    raise RfhkitError(f"unsupported shape {shape!r}")


def _level_set_log_scale(F: ScalarField, x: np.ndarray) -> float:
    """Solve ``F(exp(-l) x) = 0`` for ``l`` by Newton."""
    l = math.log(float(np.linalg.norm(x)))
    history = []
    for _ in range(NEWTON_MAX):
        y = math.exp(-l) * x
        val = F(y)
        history.append(abs(val))
        if abs(val) < NEWTON_TOL:
            return l
        d = -float(fd_gradient(F, y) @ y)
        if d >= 0:
            raise RfhkitError("level set is not star-shaped along this ray")
        l -= val / d
    raise ConvergenceError("collar Newton iteration did not converge", history)


def _ellipsoid_flow(a: Sequence[float], mol: MollifiedH):
    a2 = np.asarray(a, dtype=float) ** 2

    def fl(x, t):
        z = to_complex(x)
        G = float(np.sum(np.abs(z) ** 2 / a2))
        rate = mol.dh(math.log(G)) / (G * a2)
        return to_real(np.exp(-2j * t * rate) * z)

    return fl


@dataclass(frozen=True)
class HypersurfaceModel:
    base: HamiltonianModel
    shape: Shape
    mollifier: MollifiedH
    collar: ScalarField

    @property
    def n(self) -> int:
        return self.base.n

    def H(self, x) -> float:
        return self.base.H(np.asarray(x, dtype=float))

    def liouville(self, x) -> np.ndarray:
        return 0.5 * np.asarray(x, dtype=float)

    def lam(self, x, v) -> float:
        """``lambda = 1/2 sum (y dx - x dy)``."""
        x = np.asarray(x, dtype=float)
        return 0.5 * float(np.dot(complex_structure(self.n) @ x, v))

    def reeb(self, x) -> np.ndarray:
        return hamiltonian_vector_field(self.base, np.asarray(x, dtype=float))

    def project(self, x) -> np.ndarray:
        """Move ``x`` along its Liouville ray onto the hypersurface."""
        x = np.asarray(x, dtype=float)
        return x * math.exp(-self.collar(x) / 2)

    def flow_map(self, x, t: float, steps: int = 2000) -> np.ndarray:
        return flow_map(self.base, x, t, steps)

    @property
    def rotation_invariant(self) -> bool:
        if isinstance(self.shape, (Sphere, Ellipsoid)):
            return True
        return bool(getattr(self.shape, "rotation_invariant", False))

    def sample_surface(self, rng: np.random.Generator, count: int) -> np.ndarray:
        pts = rng.normal(size=(count, 2 * self.n))
        return np.array([self.project(p) for p in pts])


def build_defining_hamiltonian(shape: Shape, delta: float = 1.0) -> HypersurfaceModel:
    """``H = h(r)`` with ``r`` the Liouville collar coordinate of the given star-shaped hypersurface."""
    mol = MollifiedH(delta)
    r, grad_r = _collar_functions(shape)
    n = shape.n

    def H(x):
        return mol.h(r(x))

    gradH = None
    if grad_r is not None:
        def gradH(x):
            rr = r(x)
            d = mol.dh(rr)
            return d * grad_r(x) if d else np.zeros_like(x)

    batch = None
    if isinstance(shape, RadiusFunction) and shape.vectorized and shape.grad_rho is not None:
        def batch(X):
            nx = np.sqrt(np.sum(X * X, axis=1))[:, None]
            U = X / nx
            rho = np.asarray(shape.rho(U), dtype=float)[:, None]
            if not np.all(rho > 0):
                raise RfhkitError("radius function must be positive")
            g = shape.grad_rho(U)
            tangential = g - U * np.sum(U * g, axis=1)[:, None]
            rr = 2 * np.log(nx[:, 0]) - 2 * np.log(rho[:, 0])
            return mol.dh_array(rr)[:, None] * (2 * X / nx**2 - 2 * tangential / (rho * nx))

    closed = None
    if isinstance(shape, Sphere):
        closed = _ellipsoid_flow((1.0,) * n, mol)
    elif isinstance(shape, Ellipsoid):
        closed = _ellipsoid_flow(shape.a, mol)
    name = type(shape).__name__.lower()
    base = HamiltonianModel(2 * n, H, gradH, Standard(), closed, name=name, batch_gradH=batch)
    return HypersurfaceModel(base, shape, mol, r)


# --------------------------------------------------------------------------
# built-in models
# --------------------------------------------------------------------------


def sphere_flow_model(n: int = 2) -> HamiltonianModel:
    """``H = |z|^2 - 1``: its flow is ``exp(-2it) z`` everywhere."""
    return HamiltonianModel(
        2 * n,
        H=lambda x: float(x @ x) - 1.0,
        gradH=lambda x: 2 * x,
        closed_flow=lambda x, t: to_real(np.exp(-2j * t) * to_complex(x)),
        name="sphere",
    )


def magnetic_torus_model(J, c: float = 0.5) -> HamiltonianModel:
    """``H = |p|^2 / 2 - c`` on ``T^n x R^n`` with constant magnetic term ``J``; flows are unreduced."""
    J = np.asarray(J, dtype=float)
    n = J.shape[0]

    def closed(x, t):
        qn, pn = closed_flow_magnetic_torus(x[:n], x[n:], t, J, reduce=False)
        return np.concatenate([qn, pn])

    return HamiltonianModel(
        2 * n,
        H=lambda x: 0.5 * float(x[n:] @ x[n:]) - c,
        gradH=lambda x: np.concatenate([np.zeros(n), x[n:]]),
        structure=Magnetic(J),
        closed_flow=closed,
        name="magnetic_torus",
    )


def standard_J(n: int = 2) -> np.ndarray:
    """Matrix of ``dq_1 ^ dq_2`` (padded with zeros for ``n > 2``)."""
    J = np.zeros((n, n))
    J[0, 1], J[1, 0] = 1.0, -1.0
    return J


def hypersurface_from_spec(name: str, params: dict | None = None) -> HypersurfaceModel:
    params = dict(params or {})
    n = int(params.get("n", 2))
    delta = float(params.get("delta", 1.0))
    if name == "sphere":
        return build_defining_hamiltonian(Sphere(n), delta)
    if name == "ellipsoid":
        return build_defining_hamiltonian(Ellipsoid(tuple(float(a) for a in params["a"])), delta)
    if name == "star_shaped":
        shape = quartic_radius(n, float(params.get("eps", 0.1)), params.get("weights"))
        return build_defining_hamiltonian(shape, delta)
    raise RfhkitError(f"unknown hypersurface model {name!r}")


def model_from_spec(name: str, params: dict | None = None) -> HamiltonianModel:
    params = dict(params or {})
    if name == "sphere":
        return sphere_flow_model(int(params.get("n", 2)))
    if name == "magnetic_torus":
        n = int(params.get("n", 2))
        J = np.asarray(params["J"], dtype=float) if "J" in params else standard_J(n)
        return magnetic_torus_model(J, float(params.get("c", 0.5)))
    if name in ("ellipsoid", "star_shaped", "defining_sphere"):
        return hypersurface_from_spec(name.replace("defining_", ""), params).base
    raise RfhkitError(f"unknown model {name!r}")


__all__ = [
    "Ellipsoid", "HamiltonianModel", "HypersurfaceModel", "LevelSet", "Magnetic", "MollifiedH",
    "RadiusFunction", "Sphere", "Standard", "StarkZeeman", "Trajectory", "birkhoff", "birkhoff_lift",
    "birkhoff_prime", "build_defining_hamiltonian", "canonical_form", "closed_flow_magnetic_torus",
    "closed_flow_sphere", "complex_lift_real", "cotangent_lift", "drift_budget", "fd_gradient",
    "fd_jacobian", "fd_jacobian_rows", "flow", "flow_map", "flow_map_many", "hamiltonian_vector_field", "holomorphic_lift",
    "hypersurface_from_spec", "lift_pullback_defect", "magnetic_integral", "magnetic_torus_model",
    "model_from_spec", "quartic_radius", "sphere_flow_model", "standard_J", "to_complex", "to_real",
]
