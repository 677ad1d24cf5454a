"""Morse-Bott chain complexes with cascades and the Rabinowitz-Floer complexes of spheres and lens spaces.

Generators of a Morse-Bott complex are critical points of an auxiliary Morse
function on the critical components; a point on a component with grading
offset ``o`` and auxiliary index ``i`` sits in degree ``o + i``.  Boundary
coefficients are supplied as mod-2 cascade counts.

The periodic complexes below are strings of pearls: one copy of a sphere
complex per admissible period, with pearl ``p`` occupying degrees
``2pn .. 2pn + 2n - 1`` (the degenerate index of the pearl is ``(2p - 1)n``).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from rfhkit.errors import ComplexError, RfhkitError
from rfhkit.z2complex import (
    DegreeAction,
    Gf2Matrix,
    GradedComplexZ2,
    PeriodicComplexZ2,
    homology_dims,
    periodic_homology_dims,
    quotient_by_action,
    rope_ladder_matrix,
    verify_complex,
)


@dataclass(frozen=True)
class Component:
    label: str
    f: float
    offset: int


@dataclass(frozen=True)
class MorsePoint:
    comp: str
    label: str
    h_index: int

    @property
    def key(self) -> str:
        return f"{self.comp}.{self.label}"


@dataclass(frozen=True)
class MorseBottDatum:
    components: tuple[Component, ...]
    points: tuple[MorsePoint, ...]
    cascades: Mapping[tuple[str, str], int] = field(default_factory=dict)

    def __post_init__(self):
        comps = {c.label: c for c in self.components}
        if len(comps) != len(self.components):
            raise ComplexError("duplicate component labels")
        keys = set()
        for p in self.points:
            if p.comp not in comps:
                raise ComplexError(f"point {p.key} on unknown component")
            if p.key in keys:
                raise ComplexError(f"duplicate point {p.key}")
            keys.add(p.key)
        cas = {}
        for (src, dst), par in dict(self.cascades).items():
            if src not in keys or dst not in keys:
                raise ComplexError(f"cascade {src} -> {dst} refers to unknown points")
            par = int(par) % 2
            if par:
                if self.degree(src) != self.degree(dst) + 1:
                    raise ComplexError(f"cascade {src} -> {dst} does not drop the degree by one")
                if self.f_value(src) < self.f_value(dst):
                    raise ComplexError(f"cascade {src} -> {dst} increases f")
            cas[(src, dst)] = par
        object.__setattr__(self, "cascades", cas)

    def _point(self, key: str) -> MorsePoint:
        for p in self.points:
            if p.key == key:
                return p
        raise ComplexError(f"unknown point {key}")

    def _comp(self, label: str) -> Component:
        return next(c for c in self.components if c.label == label)

    def degree(self, key: str) -> int:
        p = self._point(key)
        return self._comp(p.comp).offset + p.h_index

    def f_value(self, key: str) -> float:
        return self._comp(self._point(key).comp).f

    def to_json_obj(self) -> dict:
        return {
            "components": [{"label": c.label, "f": c.f, "offset": c.offset} for c in self.components],
            "points": [{"comp": p.comp, "label": p.label, "h_index": p.h_index} for p in self.points],
            "cascades": [{"from": s, "to": t, "parity": v} for (s, t), v in sorted(self.cascades.items())],
        }

    @classmethod
    def from_json_obj(cls, obj: Mapping) -> "MorseBottDatum":
        try:
            comps = tuple(Component(str(c["label"]), float(c["f"]), int(c["offset"])) for c in obj["components"])
            pts = tuple(MorsePoint(str(p["comp"]), str(p["label"]), int(p["h_index"])) for p in obj["points"])
            cas = {(str(c["from"]), str(c["to"])): int(c["parity"]) for c in obj.get("cascades", [])}
        except (KeyError, TypeError, ValueError) as exc:
            raise ComplexError(f"malformed datum: {exc}") from exc
        return cls(comps, pts, cas)

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "MorseBottDatum":
        try:
            return cls.from_json_obj(json.loads(text))
        except json.JSONDecodeError as exc:
            raise ComplexError(f"malformed datum JSON: {exc}") from exc


def build_complex(d: MorseBottDatum) -> GradedComplexZ2:
    if not d.points:
        raise ComplexError("datum has no critical points")
    by_deg: dict[int, list[str]] = {}
    for p in d.points:
        by_deg.setdefault(d.degree(p.key), []).append(p.key)
    lo, hi = min(by_deg), max(by_deg)
    gens = {k: by_deg.get(k, []) for k in range(lo, hi + 1)}
    idx = {key: i for k in gens for i, key in enumerate(gens[k])}
    bds = {}
    for k in range(lo + 1, hi + 1):
        rows = [[0] * len(gens[k]) for _ in gens[k - 1]]
        for (src, dst), par in d.cascades.items():
            if par and d.degree(src) == k:
                rows[idx[dst]][idx[src]] ^= 1
        bds[k] = Gf2Matrix.from_rows(rows, cols=len(gens[k]))
    c = GradedComplexZ2(lo, tuple(len(gens[k]) for k in range(lo, hi + 1)), bds,
                        {k: tuple(gens[k]) for k in gens})
    verify_complex(c)
    return c


def teapot_datum() -> MorseBottDatum:
    """Height on a deformed 2-sphere: a critical circle plus four nondegenerate points."""
    comps = (
        Component("knob", 4.0, 2),
        Component("ring", 3.0, 1),
        Component("saddle", 2.0, 1),
        Component("right", 1.0, 0),
        Component("left", 0.0, 0),
    )
    pts = (
        MorsePoint("knob", "pt", 0),
        MorsePoint("ring", "max", 1),
        MorsePoint("ring", "min", 0),
        MorsePoint("saddle", "pt", 0),
        MorsePoint("left", "pt", 0),
        MorsePoint("right", "pt", 0),
    )
    cas = {
        ("knob.pt", "ring.min"): 1,
        ("ring.max", "ring.min"): 1,
        ("saddle.pt", "left.pt"): 1,
        ("saddle.pt", "right.pt"): 1,
    }
    return MorseBottDatum(comps, pts, cas)


def sphere_datum(n: int) -> MorseBottDatum:
    """``f = sum_j j |z_j|^2`` on ``S^{2n-1}``: circle ``C_j`` (index ``2(j-1)``) with height min/max."""
    if n < 1:
        raise RfhkitError("n must be positive")
    comps = tuple(Component(f"C{j}", float(j), 2 * (j - 1)) for j in range(1, n + 1))
    pts = tuple(MorsePoint(f"C{j}", lab, h) for j in range(1, n + 1) for lab, h in (("min", 0), ("max", 1)))
    cas = {(f"C{j + 1}.min", f"C{j}.max"): 1 for j in range(1, n)}
    return MorseBottDatum(comps, pts, cas)


def point_datum() -> MorseBottDatum:
    return MorseBottDatum((Component("p", 0.0, 0),), (MorsePoint("p", "pt", 0),), {})


# --------------------------------------------------------------------------
# strings of pearls
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class RfhSphereSpec:
    n: int
    m: int
    ks: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.n < 2:
            raise RfhkitError("n must be at least 2")
        if self.m < 1:
            raise RfhkitError("m must be positive")
        ks = tuple(int(k) for k in self.ks) if self.ks is not None else (1,) * self.n
        if len(ks) != self.n:
            raise RfhkitError(f"need {self.n} rotation exponents, got {len(ks)}")
        for k in ks:
            if math.gcd(k, self.m) != 1:
                raise RfhkitError(f"exponent {k} is not coprime to m={self.m}")
        object.__setattr__(self, "ks", ks)

    @property
    def period_shift(self) -> int:
        return 2 * self.n

    def cz_index(self, k: int) -> int:
        return (2 * k - 1) * self.n

    def degree(self, k: int, h_index: int) -> int:
        return 2 * k * self.n + h_index


def rfh_sphere_complex(spec: RfhSphereSpec, linking_parity: int = 1) -> PeriodicComplexZ2:
    """Untwisted-model string of pearls: one sphere complex per period, linked min-to-max."""
    block = build_complex(sphere_datum(spec.n))
    link = Gf2Matrix.from_rows([[linking_parity % 2]])
    return PeriodicComplexZ2(spec.period_shift, block, link)


def rope_ladder(spec: RfhSphereSpec) -> tuple[PeriodicComplexZ2, DegreeAction]:
    """Equivariant string of pearls for the invariant height ``cos(2 pi m t)`` on each circle.

    Each circle carries ``m`` minima and ``m`` maxima; degree ``2(j-1)`` holds
    the minima of circle ``j`` and degree ``2j-1`` its maxima.  Boundaries
    alternate between the all-ones matrix (between circles and pearls) and
    ``A = I + S`` (within a circle).  The generator acts on circle ``j`` by a
    shift of ``k_j`` positions.
    """
    m, n = spec.m, spec.n
    ones = Gf2Matrix.ones(m)
    A = rope_ladder_matrix(m)
    P = 2 * n
    bds = {k: (A if k % 2 else ones) for k in range(1, P)}
    labels = {}
    for j in range(1, n + 1):
        labels[2 * (j - 1)] = tuple(f"C{j}.min{i}" for i in range(m))
        labels[2 * j - 1] = tuple(f"C{j}.max{i}" for i in range(m))
    block = GradedComplexZ2(0, (m,) * P, bds, labels)
    perms = {}
    for j, kj in enumerate(spec.ks, start=1):
        p = tuple((i + kj) % m for i in range(m))
        perms[2 * (j - 1)] = p
        perms[2 * j - 1] = p
    return PeriodicComplexZ2(P, block, ones), DegreeAction(m, perms)


def rfh_sphere_homology(spec: RfhSphereSpec, linking_parity: int = 1) -> dict[int, int]:
    return periodic_homology_dims(rfh_sphere_complex(spec, linking_parity))


def lens_quotient_complex(spec: RfhSphereSpec) -> PeriodicComplexZ2:
    c, a = rope_ladder(spec)
    return quotient_by_action(c, a)


def rfh_lens_homology(spec: RfhSphereSpec) -> dict[int, int]:
    """Interior homology of the quotient rope ladder over a 3-period window."""
    return periodic_homology_dims(lens_quotient_complex(spec))


def displayed_lens_complex(m: int, n: int) -> PeriodicComplexZ2:
    """Quotient complex written down directly: all maps zero (m even) or alternating 1, 0 (m odd)."""
    P = 2 * n
    one = Gf2Matrix.from_rows([[m % 2]])
    zero = Gf2Matrix.zeros(1, 1)
    bds = {k: (zero if k % 2 else one) for k in range(1, P)}
    return PeriodicComplexZ2(P, GradedComplexZ2(0, (1,) * P, bds), one)


# --------------------------------------------------------------------------
# fixed points
# --------------------------------------------------------------------------

FIXED_POINT_NOTE = (
    "only constant orbits contribute; flow lines between them have no cascades, and cascades with "
    "a nonconstant end would need tau+ < tau-, so the complex is the Morse complex of Fix"
)


@dataclass(frozen=True)
class FixedPointSpec:
    betti: tuple[int, ...]

    def __post_init__(self):
        b = tuple(int(x) for x in self.betti)
        if any(x < 0 for x in b):
            raise RfhkitError("Betti numbers must be nonnegative")
        object.__setattr__(self, "betti", b)


class AnnotatedDims(dict):
    note: str = ""


def fixed_point_rfh(spec: FixedPointSpec) -> AnnotatedDims:
    out = AnnotatedDims({k: b for k, b in enumerate(spec.betti)})
    out.note = FIXED_POINT_NOTE
    return out


def dims_table(dims: Mapping[int, int]) -> str:
    lines = ["| degree | dim |", "|---:|---:|"]
    lines += [f"| {k} | {v} |" for k, v in sorted(dims.items())]
    return "\n".join(lines)


def homology_of_datum(d: MorseBottDatum) -> dict[int, int]:
    return homology_dims(build_complex(d))


__all__ = [
    "AnnotatedDims", "Component", "FixedPointSpec", "MorseBottDatum", "MorsePoint", "RfhSphereSpec",
    "build_complex", "dims_table", "displayed_lens_complex", "fixed_point_rfh", "homology_of_datum",
    "lens_quotient_complex", "point_datum", "rfh_lens_homology", "rfh_sphere_complex",
    "rfh_sphere_homology", "rope_ladder", "sphere_datum", "teapot_datum",
]
