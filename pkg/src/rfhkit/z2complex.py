"""Linear algebra over GF(2) and graded chain complexes built from it.

Matrices are stored as packed bit rows (one Python int per row, bit ``j`` is
column ``j``).  Everything here is tiny, so elimination is plain Gaussian.

Conventions
-----------
``boundaries[k]`` maps the degree-``k`` chain group to degree ``k - 1`` and
has shape ``dims(k - 1) x dims(k)``.  Column ``j`` lists the targets of the
``j``-th generator.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from rfhkit.errors import ActionError, ComplexError


# --------------------------------------------------------------------------
# Matrices
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Gf2Matrix:
    rows: int
    cols: int
    bits: tuple[int, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ComplexError("negative matrix shape")
        if len(self.bits) != self.rows:
            raise ComplexError(f"expected {self.rows} rows, got {len(self.bits)}")
        limit = 1 << self.cols
        for b in self.bits:
            if b < 0 or b >= limit:
                raise ComplexError("row has bits outside the column range")

    # construction -------------------------------------------------------

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> "Gf2Matrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        bits = []
        for r in rows:
            if len(r) != cols:
                raise ComplexError("ragged matrix rows")
            v = 0
            for j, e in enumerate(r):
                if e not in (0, 1):
                    raise ComplexError(f"entry {e!r} is not 0 or 1")
                if e:
                    v |= 1 << j
            bits.append(v)
        return cls(len(rows), cols, tuple(bits))

    @classmethod
    def from_array(cls, a) -> "Gf2Matrix":
        a = np.asarray(a)
        if a.ndim != 2:
            raise ComplexError("expected a 2-d array")
        return cls.from_rows((a % 2).astype(int).tolist(), cols=a.shape[1])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Gf2Matrix":
        return cls(rows, cols, (0,) * rows)

    @classmethod
    def identity(cls, n: int) -> "Gf2Matrix":
        return cls(n, n, tuple(1 << i for i in range(n)))

    @classmethod
    def ones(cls, rows: int, cols: int | None = None) -> "Gf2Matrix":
        cols = rows if cols is None else cols
        return cls(rows, cols, ((1 << cols) - 1,) * rows)

    @classmethod
    def permutation(cls, perm: Sequence[int]) -> "Gf2Matrix":
        """Matrix sending basis vector ``i`` to basis vector ``perm[i]``."""
        n = len(perm)
        bits = [0] * n
        for i, j in enumerate(perm):
            bits[j] |= 1 << i
        return cls(n, n, tuple(bits))

    # access ---------------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return (self.bits[i] >> j) & 1

    def to_list(self) -> list[list[int]]:
        return [[(b >> j) & 1 for j in range(self.cols)] for b in self.bits]

    def to_array(self) -> np.ndarray:
        return np.array(self.to_list(), dtype=np.uint8).reshape(self.rows, self.cols)

    def is_zero(self) -> bool:
        return not any(self.bits)

    def column(self, j: int) -> list[int]:
        return [(b >> j) & 1 for b in self.bits]

    # algebra ---------------------------------------------------------------

    def __add__(self, other: "Gf2Matrix") -> "Gf2Matrix":
        if self.shape != other.shape:
            raise ComplexError(f"shape mismatch {self.shape} + {other.shape}")
        return Gf2Matrix(self.rows, self.cols, tuple(a ^ b for a, b in zip(self.bits, other.bits)))

    def __matmul__(self, other: "Gf2Matrix") -> "Gf2Matrix":
        if self.cols != other.rows:
            raise ComplexError(f"shape mismatch {self.shape} @ {other.shape}")
        out = []
        for b in self.bits:
            acc = 0
            j = 0
            while b:
                if b & 1:
                    acc ^= other.bits[j]
                b >>= 1
                j += 1
            out.append(acc)
        return Gf2Matrix(self.rows, other.cols, tuple(out))

    def transpose(self) -> "Gf2Matrix":
        bits = [0] * self.cols
        for i, b in enumerate(self.bits):
            for j in range(self.cols):
                if (b >> j) & 1:
                    bits[j] |= 1 << i
        return Gf2Matrix(self.cols, self.rows, tuple(bits))

    @property
    def T(self) -> "Gf2Matrix":
        return self.transpose()


def rank(m: Gf2Matrix) -> int:
    """Rank over GF(2) by Gaussian elimination on the packed rows."""
    work = list(m.bits)
    r = 0
    for col in range(m.cols):
        mask = 1 << col
        pivot = next((i for i in range(r, len(work)) if work[i] & mask), None)
        if pivot is None:
            continue
        work[r], work[pivot] = work[pivot], work[r]
        for i in range(len(work)):
            if i != r and work[i] & mask:
                work[i] ^= work[r]
        r += 1
        if r == len(work):
            break
    return r


def cyclic_shift(m: int, s: int = 1) -> Gf2Matrix:
    """Permutation matrix of ``e_j -> e_{j+s mod m}``."""
    return Gf2Matrix.permutation([(j + s) % m for j in range(m)])


def rope_ladder_matrix(m: int) -> Gf2Matrix:
    """``A = I + sum_j e_{(j+1)j} + e_{1m}``, i.e. identity plus the cyclic shift."""
    return Gf2Matrix.identity(m) + cyclic_shift(m, 1)


# --------------------------------------------------------------------------
# Finite graded complexes
# --------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class GradedComplexZ2:
    lo: int
    dims: tuple[int, ...]
    boundaries: Mapping[int, Gf2Matrix] = field(default_factory=dict)
    labels: Mapping[int, tuple[str, ...]] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        if any(d < 0 for d in self.dims):
            raise ComplexError("negative chain group dimension")
        cleaned = {}
        for k, mat in dict(self.boundaries).items():
            k = int(k)
            want = (self.dim(k - 1), self.dim(k))
            if mat.shape != want:
                raise ComplexError(f"boundary {k} has shape {mat.shape}, expected {want}")
            if want[0] and want[1]:
                cleaned[k] = mat
        object.__setattr__(self, "boundaries", cleaned)
        labels = {}
        for k in self.degrees:
            given = dict(self.labels).get(k)
            if given is None:
                given = tuple(f"g{k}_{i}" for i in range(self.dim(k)))
            if len(given) != self.dim(k):
                raise ComplexError(f"degree {k}: {len(given)} labels for {self.dim(k)} generators")
            labels[k] = tuple(given)
        object.__setattr__(self, "labels", labels)

    @property
    def hi(self) -> int:
        return self.lo + len(self.dims) - 1

    @property
    def degrees(self) -> range:
        return range(self.lo, self.hi + 1)

    def dim(self, k: int) -> int:
        if self.lo <= k <= self.hi:
            return self.dims[k - self.lo]
        return 0

    def boundary(self, k: int) -> Gf2Matrix:
        mat = self.boundaries.get(k)
        if mat is None:
            return Gf2Matrix.zeros(self.dim(k - 1), self.dim(k))
        return mat

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    def __eq__(self, other):
        if not isinstance(other, GradedComplexZ2):
            return NotImplemented
        if self.dims_by_degree() != other.dims_by_degree():
            return False
        return all(self.boundary(k) == other.boundary(k) for k in self.degrees)

    def dims_by_degree(self) -> dict[int, int]:
        return {k: d for k, d in zip(self.degrees, self.dims) if d}

    def truncate(self, lo: int, hi: int) -> "GradedComplexZ2":
        """Subquotient living in degrees ``lo..hi`` (boundary out of ``lo`` dropped)."""
        dims = [self.dim(k) for k in range(lo, hi + 1)]
        bds = {k: self.boundary(k) for k in range(lo + 1, hi + 1)}
        labels = {k: self.labels.get(k, ()) for k in range(lo, hi + 1) if self.dim(k)}
        labels = {k: v for k, v in labels.items() if len(v) == self.dim(k)}
        return GradedComplexZ2(lo, tuple(dims), bds, labels)

    # JSON -------------------------------------------------------------------

    def to_json_obj(self) -> dict:
        return {
            "degrees": [self.lo, self.hi],
            "dims": list(self.dims),
            "boundaries": {str(k): self.boundary(k).to_list() for k in self.degrees
                           if self.dim(k) and self.dim(k - 1)},
            "labels": {str(k): list(self.labels[k]) for k in self.degrees},
        }

    @classmethod
    def from_json_obj(cls, obj: Mapping) -> "GradedComplexZ2":
        try:
            lo, hi = (int(v) for v in obj["degrees"])
            dims = [int(d) for d in obj["dims"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise ComplexError(f"malformed complex JSON: {exc}") from exc
        if len(dims) != hi - lo + 1:
            raise ComplexError("dims length does not match the degree range")
        c0 = cls(lo, tuple(dims))
        bds = {}
        for k, rows in dict(obj.get("boundaries", {})).items():
            k = int(k)
            bds[k] = Gf2Matrix.from_rows(rows, cols=c0.dim(k)) if rows else Gf2Matrix.zeros(c0.dim(k - 1), c0.dim(k))
        labels = {int(k): tuple(v) for k, v in dict(obj.get("labels", {})).items()}
        return cls(lo, tuple(dims), bds, labels)


def verify_complex(c: GradedComplexZ2) -> None:
    """Raise :class:`ComplexError` unless every composite of boundaries vanishes."""
    for k in range(c.lo + 1, c.hi + 1):
        comp = c.boundary(k - 1) @ c.boundary(k)
        if not comp.is_zero():
            raise ComplexError(f"boundary does not square to zero at degree {k}")


def is_complex(c: GradedComplexZ2) -> bool:
    try:
        verify_complex(c)
    except ComplexError:
        return False
    return True


def homology_dims(c: GradedComplexZ2) -> dict[int, int]:
    """``dim H_k = dim C_k - rank d_k - rank d_{k+1}`` for each degree of ``c``."""
    verify_complex(c)
    ranks = {k: rank(c.boundary(k)) for k in range(c.lo, c.hi + 2)}
    return {k: c.dim(k) - ranks[k] - ranks[k + 1] for k in c.degrees}


def euler_characteristic(dims: Mapping[int, int]) -> int:
    return sum((-1) ** (k % 2) * d for k, d in dims.items())


# --------------------------------------------------------------------------
# Periodic complexes
# --------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class PeriodicComplexZ2:
    """Z-graded complex made of copies of ``block`` shifted by ``period_shift``.

    ``linking`` sends the lowest-degree generators of copy ``j + 1`` to the
    highest-degree generators of copy ``j``.
    """

    period_shift: int
    block: GradedComplexZ2
    linking: Gf2Matrix

    def __post_init__(self):
        if self.period_shift != len(self.block.dims) or self.period_shift < 1:
            raise ComplexError("block must cover exactly one period")
        want = (self.block.dim(self.block.hi), self.block.dim(self.block.lo))
        if self.linking.shape != want:
            raise ComplexError(f"linking has shape {self.linking.shape}, expected {want}")

    def assemble(self, first: int, count: int) -> GradedComplexZ2:
        """Finite piece made of copies ``first .. first + count - 1``."""
        P = self.period_shift
        b = self.block
        lo = b.lo + first * P
        dims, bds, labels = [], {}, {}
        for j in range(first, first + count):
            for k in b.degrees:
                deg = k + j * P
                dims.append(b.dim(k))
                labels[deg] = tuple(f"{lab}[{j}]" for lab in b.labels[k])
                if k > b.lo:
                    bds[deg] = b.boundary(k)
                elif j > first:
                    bds[deg] = self.linking
        return GradedComplexZ2(lo, tuple(dims), bds, labels)

    def window(self, lo: int, hi: int) -> GradedComplexZ2:
        P = self.period_shift
        first = (lo - self.block.lo) // P
        last = (hi - self.block.lo) // P
        return self.assemble(first, last - first + 1).truncate(lo, hi)

    def middle_window(self, periods: int = 3) -> tuple[int, int]:
        """Degree range of copies ``0 .. periods - 1``."""
        return self.block.lo, self.block.lo + periods * self.period_shift - 1


def periodic_homology_dims(c: PeriodicComplexZ2, window: tuple[int, int] | None = None) -> dict[int, int]:
    """Homology of an assembled window, reported for its interior degrees only."""
    lo, hi = window if window is not None else c.middle_window(3)
    if hi - lo + 1 < 3 * c.period_shift:
        raise ComplexError(f"window [{lo}, {hi}] spans fewer than 3 periods of {c.period_shift}")
    dims = homology_dims(c.window(lo, hi))
    return {k: dims[k] for k in range(lo + 1, hi)}


def middle_period_homology(c: PeriodicComplexZ2) -> dict[int, int]:
    """Homology of the middle copy of a 3-period window."""
    lo, hi = c.middle_window(3)
    dims = periodic_homology_dims(c, (lo, hi))
    P = c.period_shift
    return {k: dims[k] for k in range(lo + P, lo + 2 * P)}


# --------------------------------------------------------------------------
# Group actions and quotients
# --------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class DegreeAction:
    """Cyclic action: ``perms[k][i]`` is the image of generator ``i`` in degree ``k``."""

    order: int
    perms: Mapping[int, tuple[int, ...]]

    def __post_init__(self):
        if self.order < 1:
            raise ActionError("order must be positive")
        perms = {int(k): tuple(int(i) for i in p) for k, p in dict(self.perms).items()}
        for k, p in perms.items():
            if sorted(p) != list(range(len(p))):
                raise ActionError(f"degree {k}: not a permutation")
        object.__setattr__(self, "perms", perms)

    def perm(self, k: int, dim: int) -> tuple[int, ...]:
        p = self.perms.get(k)
        if p is None:
            return tuple(range(dim))
        if len(p) != dim:
            raise ActionError(f"degree {k}: permutation of {len(p)} points on {dim} generators")
        return p

    def orbits(self, k: int, dim: int) -> list[list[int]]:
        p = self.perm(k, dim)
        seen, out = set(), []
        for i in range(dim):
            if i in seen:
                continue
            orbit, j = [], i
            while j not in seen:
                seen.add(j)
                orbit.append(j)
                j = p[j]
            out.append(orbit)
        return out

    @classmethod
    def trivial(cls) -> "DegreeAction":
        return cls(1, {})


def _check_action(dims: Mapping[int, int], maps: Iterable[tuple[int, int, Gf2Matrix]], a: DegreeAction) -> None:
    for k, d in dims.items():
        for orbit in a.orbits(k, d):
            if len(orbit) != a.order:
                raise ActionError(f"degree {k}: orbit of size {len(orbit)} for a free Z_{a.order} action")
    for src, dst, mat in maps:
        g_src = Gf2Matrix.permutation(a.perm(src, mat.cols))
        g_dst = Gf2Matrix.permutation(a.perm(dst, mat.rows))
        if mat @ g_src != g_dst @ mat:
            raise ActionError(f"action does not commute with the map from degree {src}")


def _quotient_matrix(mat: Gf2Matrix, src_orbits, dst_orbits) -> Gf2Matrix:
    rows = []
    for tgt in dst_orbits:
        row = []
        for orb in src_orbits:
            rep = orb[0]
            row.append(sum(mat[t, rep] for t in tgt) % 2)
        rows.append(row)
    return Gf2Matrix.from_rows(rows, cols=len(src_orbits))


def _quotient_graded(c: GradedComplexZ2, a: DegreeAction):
    orbits = {k: a.orbits(k, c.dim(k)) for k in c.degrees}
    dims = tuple(len(orbits[k]) for k in c.degrees)
    bds = {k: _quotient_matrix(c.boundary(k), orbits[k], orbits[k - 1])
           for k in range(c.lo + 1, c.hi + 1)}
    labels = {k: tuple("{" + c.labels[k][o[0]] + "}" for o in orbits[k]) for k in c.degrees}
    return GradedComplexZ2(c.lo, dims, bds, labels), orbits


def quotient_by_action(c, a: DegreeAction):
    """Quotient complex whose generators are orbits of a free cyclic action.

    The induced boundary counts, mod 2, the targets in an orbit reached from a
    chosen orbit representative.
    """
    if isinstance(c, PeriodicComplexZ2):
        b = c.block
        maps = [(k, k - 1, b.boundary(k)) for k in range(b.lo + 1, b.hi + 1)]
        maps.append((b.lo, b.hi, c.linking))
        _check_action(b.dims_by_degree(), maps, a)
        qb, orbits = _quotient_graded(b, a)
        link = _quotient_matrix(c.linking, orbits[b.lo], orbits[b.hi])
        return PeriodicComplexZ2(c.period_shift, qb, link)
    if isinstance(c, GradedComplexZ2):
        maps = [(k, k - 1, c.boundary(k)) for k in range(c.lo + 1, c.hi + 1)]
        _check_action(c.dims_by_degree(), maps, a)
        return _quotient_graded(c, a)[0]
    raise TypeError(f"cannot take the quotient of {type(c).__name__}")


def complex_from_json(text: str) -> GradedComplexZ2:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ComplexError(f"malformed complex JSON: {exc}") from exc
    return GradedComplexZ2.from_json_obj(obj)


def complex_to_json(c: GradedComplexZ2) -> str:
    return json.dumps(c.to_json_obj(), sort_keys=True)
