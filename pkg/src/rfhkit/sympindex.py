"""Symplectic linear algebra and Conley-Zehnder / Maslov indices of sampled paths.

Phase-space vectors are laid out as ``(x_1..x_n, y_1..y_n)`` with ``z = x + iy``.
The standard form is ``omega(u, v) = u^T OMEGA v`` with
``OMEGA = [[0, -I], [I, 0]]`` (so ``omega = sum dy ^ dx``), and Hamiltonian
vector fields are ``X_H = J0 grad H`` with ``J0 = -OMEGA``.  Under this
convention the flow of ``|z|^2 / 2`` is ``z -> exp(-it) z`` and carries index
``+n`` per half turn.

Index algorithm
---------------
For a path ``Psi`` the graph ``{(v, Psi v)}`` is a Lagrangian path relative to
the diagonal.  A linear symplectic change of coordinates sends the diagonal
to ``R^{2n}`` and the graph to the column span of

    Z(t) = (I + Psi(t)) + i OMEGA (Psi(t) - I).

With the unitary frame ``U`` of ``Z`` and ``W = U^T U``, eigenvalue one of
``W`` marks a crossing.  The index is the continuous winding of
``det W = (det Z / |det Z|)^2`` plus an endpoint correction read off the
eigenvalue angles of ``W`` at both ends.  Only unit-modulus eigenvalues of a
normal matrix are ever computed, so no Krein-signature bookkeeping is needed.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from rfhkit.errors import DegenerateEndpointError, PathError

TOL_SYMP = 1e-9
STEP_BOUND = 0.5
DEGENERATE_EPS = 1e-4
_ENDPOINT_GAP = 1e-8


def standard_form(n: int) -> np.ndarray:
    out = np.zeros((2 * n, 2 * n))
    idx = np.arange(n)
    out[idx, n + idx] = -1.0
    out[n + idx, idx] = 1.0
    return out


def complex_structure(n: int) -> np.ndarray:
    return -standard_form(n)


def rotation(theta: float, n: int = 1) -> np.ndarray:
    """``exp(theta J0)``: multiplication by ``exp(-i theta)`` on every coordinate."""
    c, s = math.cos(theta), math.sin(theta)
    I = np.eye(n)
    return np.block([[c * I, s * I], [-s * I, c * I]])


def from_complex_linear(A: np.ndarray) -> np.ndarray:
    """Real ``2n x 2n`` matrix of a complex-linear map ``z -> A z``."""
    A = np.asarray(A, dtype=complex)
    X, Y = A.real, A.imag
    return np.block([[X, -Y], [Y, X]])


def half_dim(m: np.ndarray) -> int:
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise PathError(f"expected a square matrix, got shape {m.shape}")
    if m.shape[0] % 2:
        raise PathError(f"odd dimension {m.shape[0]}")
    return m.shape[0] // 2


def symplectic_defect(m: np.ndarray) -> float:
    n = half_dim(m)
    O = standard_form(n)
    return float(np.max(np.abs(m.T @ O @ m - O)))


def check_symplectic(m: np.ndarray, tol: float = TOL_SYMP) -> bool:
    """True iff ``|M^T OMEGA M - OMEGA|_inf <= tol``; raises on odd dimension."""
    return symplectic_defect(np.asarray(m, dtype=float)) <= tol


def unitary_part(m: np.ndarray) -> np.ndarray:
    """Orthogonal factor of the polar decomposition (unitary for symplectic ``m``)."""
    a, _, bt = np.linalg.svd(m)
    return a @ bt


def complex_det(u: np.ndarray) -> complex:
    """``det_C`` of a matrix commuting with ``J0``, i.e. of the form ``[[X, Y], [-Y, X]]``."""
    n = half_dim(u)
    X, Y = u[:n, :n], u[:n, n:]
    return complex(np.linalg.det(X + 1j * Y))


@dataclass(frozen=True, eq=False)
class SymplecticPath:
    """Samples of a path of symplectic matrices at uniform times in ``[0, 1]``."""

    samples: np.ndarray
    tol: float = TOL_SYMP
    step_bound: float = STEP_BOUND

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=float)
        if s.ndim != 3 or s.shape[0] < 2:
            raise PathError("need at least two samples of square matrices")
        half_dim(s[0])
        for i, m in enumerate(s):
            if symplectic_defect(m) > self.tol:
                raise PathError(f"sample {i} is not symplectic (defect {symplectic_defect(m):.3e})")
        steps = [np.linalg.norm(s[i + 1] - s[i], 2) for i in range(len(s) - 1)]
        worst = max(steps)
        if worst > self.step_bound:
            raise PathError(f"path resolution too coarse: step {worst:.3f} > {self.step_bound}")
        object.__setattr__(self, "samples", s)

    @property
    def n(self) -> int:
        return self.samples.shape[1] // 2

    @property
    def times(self) -> np.ndarray:
        return np.linspace(0.0, 1.0, len(self.samples))

    def __len__(self) -> int:
        return len(self.samples)

    def starts_at_identity(self) -> bool:
        return float(np.max(np.abs(self.samples[0] - np.eye(2 * self.n)))) <= self.tol

    def is_loop(self) -> bool:
        return float(np.max(np.abs(self.samples[-1] - self.samples[0]))) <= max(self.tol, 1e-8)

    @classmethod
    def from_function(cls, f: Callable[[float], np.ndarray], samples: int = 201, **kw) -> "SymplecticPath":
        ts = np.linspace(0.0, 1.0, samples)
        return cls(np.array([f(t) for t in ts]), **kw)

    def map(self, g: Callable[[float, np.ndarray], np.ndarray]) -> "SymplecticPath":
        return SymplecticPath(np.array([g(t, m) for t, m in zip(self.times, self.samples)]),
                              tol=self.tol, step_bound=self.step_bound)

    def to_json(self) -> str:
        return json.dumps([m.tolist() for m in self.samples])

    @classmethod
    def from_json(cls, text: str, **kw) -> "SymplecticPath":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise PathError(f"malformed path JSON: {exc}") from exc
        return cls(np.array(data, dtype=float), **kw)


def concatenate(first: SymplecticPath, second: SymplecticPath) -> SymplecticPath:
    """Run ``first`` then ``second``; the second must start where the first ends."""
    if np.max(np.abs(first.samples[-1] - second.samples[0])) > 1e-8:
        raise PathError("paths do not meet")
    return SymplecticPath(np.concatenate([first.samples, second.samples[1:]]),
                          tol=max(first.tol, second.tol), step_bound=max(first.step_bound, second.step_bound))


def pointwise_product(left: SymplecticPath, right: SymplecticPath) -> SymplecticPath:
    if len(left) != len(right):
        raise PathError("paths sampled at different resolutions")
    return SymplecticPath(np.einsum("tij,tjk->tik", left.samples, right.samples),
                          tol=max(left.tol, right.tol) * 10, step_bound=1.0)


# --------------------------------------------------------------------------
# index computations
# --------------------------------------------------------------------------


def _graph_frame(m: np.ndarray) -> np.ndarray:
    n = m.shape[0] // 2
    I = np.eye(2 * n)
    return (I + m) + 1j * (standard_form(n) @ (m - I))


def _endpoint_term(m: np.ndarray) -> float:
    """Sum of ``1/2 - beta/2pi`` over eigenvalue angles ``beta`` of ``W`` (zero at ``beta = 0``)."""
    Z = _graph_frame(m)
    # Z^*Z is real for a Lagrangian frame; a real triangular change keeps U^T U's spectrum.
    R = np.linalg.cholesky((Z.conj().T @ Z).real).T
    U = Z @ np.linalg.inv(R)
    beta = np.mod(np.angle(np.linalg.eigvals(U.T @ U)), 2 * np.pi)
    out = 0.0
    for b in beta:
        if b < 1e-7 or b > 2 * np.pi - 1e-7:
            continue
        out += 0.5 - b / (2 * np.pi)
    return out


def _winding(samples: np.ndarray) -> float:
    """Continuous change of ``arg det W`` along the samples (in units of full turns)."""
    phases = []
    for m in samples:
        d = np.linalg.det(_graph_frame(m))
        phases.append((d / abs(d)) ** 2)
    phases = np.array(phases)
    jumps = np.angle(phases[1:] / phases[:-1])
    if len(jumps) and np.max(np.abs(jumps)) > np.pi / 2:
        raise PathError("path resolution too coarse: determinant phase jumps by more than pi/2")
    return float(np.sum(jumps) / (2 * np.pi))


def relative_index(path: SymplecticPath) -> float:
    """Robbin-Salamon index of the graph path relative to the diagonal.

    Integer when both endpoints are nondegenerate; endpoints with eigenvalue
    one contribute the usual half-weights.
    """
    s = path.samples
    return _winding(s) + _endpoint_term(s[-1]) - _endpoint_term(s[0])


def _nondegenerate(m: np.ndarray) -> bool:
    sv = np.linalg.svd(m - np.eye(m.shape[0]), compute_uv=False)
    return sv[-1] > _ENDPOINT_GAP


def _perturbed(path: SymplecticPath, eps: float) -> SymplecticPath:
    n = path.n
    return SymplecticPath(np.array([m @ rotation(eps * t, n) for t, m in zip(path.times, path.samples)]),
                          tol=path.tol * 10, step_bound=path.step_bound + eps)


def cz_index(path: SymplecticPath, degenerate: bool = False, eps: float = DEGENERATE_EPS) -> int:
    """Conley-Zehnder index of a sampled path starting at the identity.

    With ``degenerate=True`` an endpoint with eigenvalue one is allowed; the
    path is then replaced by ``Psi(t) exp(-eps OMEGA t)`` and the result is
    checked to be the same for ``eps`` and ``eps / 2``.
    """
    if not path.starts_at_identity():
        raise PathError("path must start at the identity")
    if not degenerate:
        if not _nondegenerate(path.samples[-1]):
            raise DegenerateEndpointError("endpoint has eigenvalue 1; pass degenerate=True")
        return _rounded(relative_index(path))
    values = []
    for e in (eps, eps / 2):
        p = _perturbed(path, e)
        if not _nondegenerate(p.samples[-1]):
            raise DegenerateEndpointError("perturbation did not remove the eigenvalue 1")
        values.append(_rounded(relative_index(p)))
    if values[0] != values[1]:
        raise PathError(f"degenerate convention unstable: {values}")
    return values[0]


def _rounded(x: float) -> int:
    k = round(x)
    if abs(x - k) > 1e-6:
        raise PathError(f"index {x:.6f} is not an integer; path too coarse or endpoint degenerate")
    return int(k)


def maslov_loop_index(path: SymplecticPath) -> int:
    """Winding number of ``det_C`` of the unitary part along a loop."""
    if not path.is_loop():
        raise PathError("path is not a loop")
    dets = np.array([complex_det(unitary_part(m)) for m in path.samples])
    jumps = np.angle(dets[1:] / dets[:-1])
    if np.max(np.abs(jumps)) > np.pi / 2:
        raise PathError("loop resolution too coarse")
    return _rounded(float(np.sum(jumps) / (2 * np.pi)))


def relative_cz(path0: SymplecticPath, path1: SymplecticPath, degenerate: bool = False) -> int:
    """Transverse index difference ``mu(Psi^1) - mu(Psi^0)`` of two orbits."""
    return cz_index(path1, degenerate) - cz_index(path0, degenerate)


# --------------------------------------------------------------------------
# sphere orbits
# --------------------------------------------------------------------------


def sphere_period(m: int, k: int) -> float:
    return math.pi / m * (m * k - 1)


def sphere_orbit_path(n: int, m: int, k: int, samples: int | None = None) -> SymplecticPath:
    """Linearised flow ``t -> D(z -> exp(-2i tau_k t) z)`` along a sphere orbit.

    The flow is complex linear, so the frame it transports is unitary and
    compatible with the twist.
    """
    tau = sphere_period(m, k)
    if samples is None:
        samples = max(65, int(abs(2 * tau) / 0.2) + 2)
    return SymplecticPath.from_function(lambda t: rotation(2 * tau * t, n), samples)


def sphere_orbit_index(n: int, m: int, k: int) -> int:
    path = sphere_orbit_path(n, m, k)
    return cz_index(path, degenerate=not _nondegenerate(path.samples[-1]))


__all__ = [
    "SymplecticPath", "check_symplectic", "complex_det", "complex_structure", "concatenate",
    "cz_index", "from_complex_linear", "maslov_loop_index", "pointwise_product", "relative_cz",
    "relative_index", "rotation", "sphere_orbit_index", "sphere_orbit_path", "sphere_period",
    "standard_form", "symplectic_defect", "unitary_part",
]
