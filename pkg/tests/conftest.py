from __future__ import annotations

import itertools
import math

import numpy as np
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from rfhkit.z2complex import Gf2Matrix, GradedComplexZ2

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


# ---------------------------------------------------------------------------
# GF(2) oracles
# ---------------------------------------------------------------------------


def _apply(m: Gf2Matrix, v: tuple[int, ...]) -> tuple[int, ...]:
    a = m.to_array() if m.rows and m.cols else np.zeros((m.rows, m.cols), dtype=int)
    return tuple(int(x) for x in (a @ np.array(v, dtype=int)) % 2) if m.cols else (0,) * m.rows


def brute_force_homology(c: GradedComplexZ2) -> dict[int, int]:
    """Enumerate every chain: dim H_k = log2 |ker| - log2 |im|."""
    out = {}
    for k in c.degrees:
        d = c.dim(k)
        vecs = list(itertools.product((0, 1), repeat=d))
        ker = sum(1 for v in vecs if not any(_apply(c.boundary(k), v))) if c.dim(k - 1) else len(vecs)
        up = c.dim(k + 1)
        if up:
            im = {_apply(c.boundary(k + 1), w) for w in itertools.product((0, 1), repeat=up)}
            nim = len(im)
        else:
            nim = 1
        out[k] = round(math.log2(ker)) - round(math.log2(nim))
    return out


def gf2_inverse(a: np.ndarray) -> np.ndarray:
    n = len(a)
    m = np.concatenate([a % 2, np.eye(n, dtype=int)], axis=1)
    for col in range(n):
        piv = next(r for r in range(col, n) if m[r, col])
        m[[col, piv]] = m[[piv, col]]
        for r in range(n):
            if r != col and m[r, col]:
                m[r] ^= m[col]
    return m[:, n:]


@st.composite
def invertible_gf2(draw, n: int) -> np.ndarray:
    """Product of random elementary row additions and a permutation."""
    a = np.eye(n, dtype=int)
    if n > 1:
        for _ in range(draw(st.integers(0, 3 * n))):
            i = draw(st.integers(0, n - 1))
            j = draw(st.integers(0, n - 1))
            if i != j:
                a[i] ^= a[j]
        perm = draw(st.permutations(range(n)))
        a = a[list(perm)]
    return a


@st.composite
def chain_complexes(draw, max_total: int = 12, max_len: int = 5) -> GradedComplexZ2:
    """Random complex: a direct sum of Z_2's and acyclic pairs, then a random change of basis."""
    length = draw(st.integers(1, max_len))
    lo = draw(st.integers(-3, 3))
    homology = [draw(st.integers(0, 2)) for _ in range(length)]
    pairs = [draw(st.integers(0, 2)) for _ in range(length - 1)]  # pairs between degree i+1 and i
    dims = []
    for i in range(length):
        dims.append(homology[i] + (pairs[i] if i < length - 1 else 0) + (pairs[i - 1] if i > 0 else 0))
    total = sum(dims)
    if total > max_total or total == 0:
        dims = [1] + [0] * (length - 1)
        homology = [1] + [0] * (length - 1)
        pairs = [0] * (length - 1)
    # basis per degree: [homology | pairs going down (targets) | pairs going up (sources)]
    raw = {}
    for i in range(1, length):
        rows, cols = dims[i - 1], dims[i]
        m = np.zeros((rows, cols), dtype=int)
        tgt0 = homology[i - 1]
        src0 = homology[i] + (pairs[i] if i < length - 1 else 0)
        for p in range(pairs[i - 1]):
            m[tgt0 + p, src0 + p] = 1
        raw[i] = m
    G = [draw(invertible_gf2(d)) if d else np.zeros((0, 0), dtype=int) for d in dims]
    bds = {}
    for i in range(1, length):
        if dims[i] and dims[i - 1]:
            mat = (G[i - 1] @ raw[i] @ gf2_inverse(G[i])) % 2
        else:
            mat = np.zeros((dims[i - 1], dims[i]), dtype=int)
        bds[lo + i] = Gf2Matrix.from_rows(mat.tolist(), cols=dims[i])
    return GradedComplexZ2(lo, tuple(dims), bds)


# ---------------------------------------------------------------------------
# symplectic oracles
# ---------------------------------------------------------------------------


def block_rotation_generator(thetas, hyperbolic=()) -> np.ndarray:
    """Symmetric ``S`` so that ``exp(t J0 S)`` rotates plane j by ``theta_j t`` (hyperbolic planes after)."""
    n = len(thetas) + len(hyperbolic)
    S = np.zeros((2 * n, 2 * n))
    for j, th in enumerate(thetas):
        S[j, j] = S[n + j, n + j] = th
    for i, (a, b) in enumerate(hyperbolic):
        j = len(thetas) + i
        S[j, j], S[n + j, n + j] = a, b
    return S


def crossing_form_index(thetas, hyperbolic=()) -> int:
    """Robbin-Salamon count for ``exp(t J0 S)`` with ``S`` as above and nondegenerate end.

    The crossing form at a crossing is ``S`` on ``ker(Psi - I)``: each elliptic
    plane contributes a signature ``2 sign(theta)`` at every interior crossing
    ``|theta| t in 2 pi Z`` and half of that at ``t = 0``.  Hyperbolic planes
    only cross at ``t = 0`` with signature 0.
    """
    total = 0.0
    for th in thetas:
        s = 2 * np.sign(th)
        total += 0.5 * s
        k = 1
        while 2 * math.pi * k < abs(th):
            total += s
            k += 1
    for a, b in hyperbolic:
        total += 0.5 * (np.sign(a) + np.sign(b))
    return int(round(total))
