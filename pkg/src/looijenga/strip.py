"""Toric strip geometries and their open/closed vertex amplitudes.

A strip is a chain of compact edges ``l_1, ..., l_k`` hanging off the
brane edge ``l_0``.  Each coefficient of the open amplitude in the
Kahler variables is a finite sum over tuples of partitions, because the
edge classes are linearly independent.
"""
from __future__ import annotations

import itertools
import json
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Iterable, Sequence

from .partitions import EMPTY, Partition, enumerate_partitions, hooks, kappa
from .qalgebra import HalfLaurent, Phased, QRational
from .schur import DEFAULT_CONVENTION, SpecializationConvention, vertex_amplitude

__all__ = [
    "GeometryError",
    "StripGeometry",
    "CurveClass",
    "PRESETS",
    "DP3_0_2",
    "load_geometry",
    "edge_factor",
    "open_amplitude_coefficient",
    "closed_string_coefficient",
    "invert_w_empty",
    "connected_open_series",
    "box",
    "tuple_counter",
    "CONNECTED_I_POWER",
]


class GeometryError(ValueError):
    """Malformed or unsupported geometry description."""


CurveClass = tuple  # tuple[int, ...] of edge multiplicities


def _rank(rows: Sequence[Sequence[int]]) -> int:
    """Rank over Q by fraction-exact elimination."""
    m = [[Fraction(x) for x in row] for row in rows]
    rank = 0
    ncols = len(m[0]) if m else 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(m)) if m[r][col] != 0), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        for r in range(len(m)):
            if r != rank and m[r][col] != 0:
                f = m[r][col] / m[rank][col]
                m[r] = [a - f * b for a, b in zip(m[r], m[rank])]
        rank += 1
    return rank


@dataclass(frozen=True)
class StripGeometry:
    """Strip data: normal degrees and classes of the edges plus a class map.

    ``class_map`` has one row per surface-class coordinate and one column
    per entry of ``(winding, c_1, ..., c_k)``.  ``d1_covector`` and
    ``d2_covector`` give ``D_1 . beta`` and ``D_2 . beta`` as linear forms in
    the surface coordinates; they are optional and only needed on the log
    side.
    """

    brane_edge_degree: int
    edges: tuple  # ((normal_degree, class_vector), ...)
    brane_class_vector: tuple
    class_map: tuple
    h2_basis_labels: tuple = ()
    d1_covector: tuple | None = None
    d2_covector: tuple | None = None
    name: str = field(default="", compare=False)

    def __post_init__(self):
        edges = tuple((int(d), tuple(int(x) for x in v)) for d, v in self.edges)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "brane_class_vector", tuple(int(x) for x in self.brane_class_vector))
        object.__setattr__(self, "class_map", tuple(tuple(int(x) for x in row) for row in self.class_map))
        object.__setattr__(self, "h2_basis_labels", tuple(self.h2_basis_labels))
        for attr in ("d1_covector", "d2_covector"):
            v = getattr(self, attr)
            if v is not None:
                object.__setattr__(self, attr, tuple(int(x) for x in v))
        self.validate()

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @property
    def normal_degrees(self) -> tuple[int, ...]:
        return tuple(d for d, _ in self.edges)

    def validate(self) -> None:
        if not self.edges:
            raise GeometryError("a strip needs at least one compact edge")
        width = len(self.edges[0][1])
        if any(len(v) != width for _, v in self.edges):
            raise GeometryError("edge class vectors have different lengths")
        if self.brane_class_vector and len(self.brane_class_vector) != width:
            raise GeometryError("brane class has the wrong length")
        if _rank([v for _, v in self.edges]) < len(self.edges):
            raise GeometryError("edge classes are linearly dependent")
        if self.class_map:
            cols = len(self.class_map[0])
            if any(len(row) != cols for row in self.class_map):
                raise GeometryError("class_map rows have different lengths")
            if cols != len(self.edges) + 1:
                raise GeometryError(
                    f"class_map needs {len(self.edges) + 1} columns (winding plus edges), got {cols}")
            if _rank(self.class_map) < cols:
                raise GeometryError("class_map does not have full column rank")
            for attr in ("d1_covector", "d2_covector"):
                v = getattr(self, attr)
                if v is not None and len(v) != len(self.class_map):
                    raise GeometryError(f"{attr} must have one entry per surface coordinate")

    def surface_class(self, winding: int, c: Sequence[int]) -> tuple[int, ...]:
        vec = (winding,) + tuple(c)
        return tuple(sum(a * b for a, b in zip(row, vec)) for row in self.class_map)

    def open_class(self, d: Sequence[int]) -> tuple[int, tuple[int, ...]] | None:
        """Invert the class map: ``(winding, c)`` with ``Phi(winding, c) = d``.

        Returns ``None`` when ``d`` is not in the integral image.
        """
        rows = [list(map(Fraction, row)) + [Fraction(x)] for row, x in zip(self.class_map, d)]
        ncols = len(self.class_map[0])
        r = 0
        pivots = []
        for col in range(ncols):
            piv = next((i for i in range(r, len(rows)) if rows[i][col] != 0), None)
            if piv is None:
                continue
            rows[r], rows[piv] = rows[piv], rows[r]
            p = rows[r][col]
            rows[r] = [x / p for x in rows[r]]
            for i in range(len(rows)):
                if i != r and rows[i][col] != 0:
                    f = rows[i][col]
                    rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
            pivots.append(col)
            r += 1
        if any(row[-1] != 0 for row in rows[r:]):
            return None
        sol = [Fraction(0)] * ncols
        for i, col in enumerate(pivots):
            sol[col] = rows[i][-1]
        if any(x.denominator != 1 for x in sol):
            return None
        sol = [int(x) for x in sol]
        return sol[0], tuple(sol[1:])

    def d1_dot(self, d: Sequence[int]) -> int:
        if self.d1_covector is None:
            raise GeometryError("geometry has no d1_covector")
        return sum(a * b for a, b in zip(self.d1_covector, d))

    def d2_dot(self, d: Sequence[int]) -> int:
        if self.d2_covector is None:
            raise GeometryError("geometry has no d2_covector")
        return sum(a * b for a, b in zip(self.d2_covector, d))

    def to_json_obj(self) -> dict:
        obj = {
            "brane_edge_degree": self.brane_edge_degree,
            "brane_class": list(self.brane_class_vector),
            "edges": [{"normal_degree": d, "class": list(v)} for d, v in self.edges],
            "class_map": [list(r) for r in self.class_map],
            "h2_basis": list(self.h2_basis_labels),
        }
        if self.d1_covector is not None:
            obj["d1_covector"] = list(self.d1_covector)
        if self.d2_covector is not None:
            obj["d2_covector"] = list(self.d2_covector)
        return obj

    @classmethod
    def from_json_obj(cls, obj: dict, name: str = "") -> "StripGeometry":
        if not isinstance(obj, dict):
            raise GeometryError("geometry must be a JSON object")
        required = ("brane_edge_degree", "brane_class", "edges", "class_map")
        for key in required:
            if key not in obj:
                raise GeometryError(f"missing field {key!r}")

        def ints(value, what):
            if not isinstance(value, list) or not all(
                    isinstance(x, int) and not isinstance(x, bool) for x in value):
                raise GeometryError(f"{what} must be a list of integers")
            return tuple(value)

        if not isinstance(obj["brane_edge_degree"], int):
            raise GeometryError("field 'brane_edge_degree' must be an integer")
        if not isinstance(obj["edges"], list):
            raise GeometryError("field 'edges' must be a list")
        edges = []
        for i, e in enumerate(obj["edges"]):
            if not isinstance(e, dict) or "normal_degree" not in e or "class" not in e:
                raise GeometryError(f"edges[{i}] needs 'normal_degree' and 'class'")
            if not isinstance(e["normal_degree"], int):
                raise GeometryError(f"edges[{i}].normal_degree must be an integer")
            edges.append((e["normal_degree"], ints(e["class"], f"edges[{i}].class")))
        if not isinstance(obj["class_map"], list):
            raise GeometryError("field 'class_map' must be a list of rows")
        cmap = tuple(ints(r, f"class_map[{i}]") for i, r in enumerate(obj["class_map"]))
        labels = obj.get("h2_basis", [])
        if not isinstance(labels, list) or not all(isinstance(x, str) for x in labels):
            raise GeometryError("field 'h2_basis' must be a list of strings")
        d1 = obj.get("d1_covector")
        d2 = obj.get("d2_covector")
        return cls(
            brane_edge_degree=obj["brane_edge_degree"],
            edges=tuple(edges),
            brane_class_vector=ints(obj["brane_class"], "brane_class"),
            class_map=cmap,
            h2_basis_labels=tuple(labels),
            d1_covector=None if d1 is None else ints(d1, "d1_covector"),
            d2_covector=None if d2 is None else ints(d2, "d2_covector"),
            name=name,
        )


# dP3(0,2): brane on H-E2-E3, edges E3, E2-E3, H-E1-E2; surface coordinates
# (d0, d1, d2, d3) of d0 (H-E1-E2-E3) + d1 E1 + d2 E2 + d3 E3.
DP3_0_2 = StripGeometry(
    brane_edge_degree=-1,
    edges=((-1, (0, 0, 0, 1)), (-2, (0, 0, 1, -1)), (-1, (1, -1, -1, 0))),
    brane_class_vector=(1, 0, -1, -1),
    class_map=(
        (0, 1, 0, 0),   # d0 = c1
        (1, 0, 0, 0),   # d1 = winding
        (0, 0, 1, 0),   # d2 = c2
        (0, 1, -1, 1),  # d3 = c1 - c2 + c3
    ),
    h2_basis_labels=("H", "E1", "E2", "E3"),
    d1_covector=(0, 1, 0, 0),
    d2_covector=(0, 0, 1, 1),
    name="dp3-0-2",
)

PRESETS = {"dp3-0-2": DP3_0_2}


def load_geometry(spec: str) -> StripGeometry:
    """Resolve a preset name or read a geometry JSON file."""
    if spec in PRESETS:
        return PRESETS[spec]
    path = Path(spec)
    if not path.exists():
        raise GeometryError(f"unknown preset or missing file: {spec}")
    text = path.read_text(encoding="utf-8")
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GeometryError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    try:
        return StripGeometry.from_json_obj(obj, name=str(path))
    except GeometryError as exc:
        raise GeometryError(f"{path}: {exc}") from None


# ------------------------------------------------------------ amplitudes


# Overall phase of the hook-sum conversion: i^CONNECTED_I_POWER.  With these
# vertex and edge conventions the phase +i reproduces the closed forms; -i
# gives their negatives class by class.
CONNECTED_I_POWER = 1


class _TupleCounter(threading.local):
    def __init__(self):
        self.count = 0


tuple_counter = _TupleCounter()


def edge_factor(normal_degree: int, mu: Partition,
                convention: SpecializationConvention = DEFAULT_CONVENTION) -> QRational:
    """``(-1)^{deg |mu|} q^{(deg+1) kappa(mu)/2}``, oriented like the vertex."""
    sign = -1 if (normal_degree * mu.size) % 2 else 1
    exponent = -convention.exponent_sign * (normal_degree + 1) * kappa(mu)
    return QRational(HalfLaurent.monomial(exponent, sign))


def _check_class(c: Sequence[int], geometry: StripGeometry) -> tuple[int, ...]:
    c = tuple(int(x) for x in c)
    if len(c) != geometry.num_edges:
        raise GeometryError(f"class {c} needs {geometry.num_edges} coordinates")
    if any(x < 0 for x in c):
        raise GeometryError(f"class {c} has a negative coordinate")
    return c


@lru_cache(maxsize=None)
def _open_coefficient(geometry: StripGeometry, mu: Partition, c: tuple,
                      convention: SpecializationConvention) -> QRational:
    degrees = (geometry.brane_edge_degree,) + geometry.normal_degrees
    head = edge_factor(degrees[0], mu, convention)
    total = QRational(0)
    for inner in itertools.product(*(enumerate_partitions(ci) for ci in c)):
        tuple_counter.count += 1
        chain = (mu,) + inner + (EMPTY,)
        term = head
        for i in range(1, len(chain) - 1):
            term = term * edge_factor(degrees[i], chain[i], convention)
        for i in range(len(chain) - 1):
            term = term * vertex_amplitude(chain[i + 1], chain[i], convention)
            if term.is_zero():
                break
        total = total + term
    return total


def open_amplitude_coefficient(geometry: StripGeometry, mu: Partition, c: Sequence[int],
                               convention: SpecializationConvention = DEFAULT_CONVENTION) -> QRational:
    """Coefficient of ``Q^{sum c_i [l_i]}`` in the disconnected amplitude ``W_mu``."""
    return _open_coefficient(geometry, Partition(mu), _check_class(c, geometry), convention)


def closed_string_coefficient(geometry: StripGeometry, c: Sequence[int],
                              convention: SpecializationConvention = DEFAULT_CONVENTION) -> QRational:
    """Coefficient of ``Q^c`` in the closed amplitude ``W_empty``."""
    return open_amplitude_coefficient(geometry, EMPTY, c, convention)


def box(bound: Sequence[int]) -> list[tuple[int, ...]]:
    """All classes componentwise below ``bound``, in lexicographic order."""
    return [tuple(x) for x in itertools.product(*(range(b + 1) for b in bound))]


def _below(c: tuple) -> list[tuple]:
    return box(c)


@lru_cache(maxsize=None)
def _inverse_coefficient(geometry: StripGeometry, c: tuple,
                         convention: SpecializationConvention) -> QRational:
    if not any(c):
        return QRational(1)
    total = QRational(0)
    for a in _below(c):
        if not any(a):
            continue
        rest = tuple(x - y for x, y in zip(c, a))
        w = _open_coefficient(geometry, EMPTY, a, convention)
        if w.is_zero():
            continue
        total = total - w * _inverse_coefficient(geometry, rest, convention)
    return total


def invert_w_empty(geometry: StripGeometry, bound: Sequence[int],
                   convention: SpecializationConvention = DEFAULT_CONVENTION) -> dict[tuple, QRational]:
    """Coefficients of ``1 / W_empty`` on the box below ``bound``."""
    bound = _check_class(bound, geometry)
    return {c: _inverse_coefficient(geometry, c, convention) for c in box(bound)}


@lru_cache(maxsize=None)
def _connected(geometry: StripGeometry, winding: int, c: tuple,
               convention: SpecializationConvention) -> Phased:
    total = QRational(0)
    for k, hook in enumerate(hooks(winding)):
        hook_sum = QRational(0)
        for a in _below(c):
            rest = tuple(x - y for x, y in zip(c, a))
            inv = _inverse_coefficient(geometry, rest, convention)
            if inv.is_zero():
                continue
            hook_sum = hook_sum + _open_coefficient(geometry, hook, a, convention) * inv
        if k % 2:
            total = total - hook_sum
        else:
            total = total + hook_sum
    return Phased.make(CONNECTED_I_POWER, total * QRational(1, winding))


def connected_open_series(geometry: StripGeometry, winding: int, c: Sequence[int],
                          convention: SpecializationConvention = DEFAULT_CONVENTION) -> Phased:
    """Connected single-boundary open series with winding ``winding`` in class ``c``.

    Returns ``i^a * V`` with ``V`` real; under ``q = exp(i hbar)`` it is
    ``sum_g OGW_{g,(winding),c} hbar^{2g-1}``.
    """
    if winding <= 0:
        raise ValueError(f"winding must be positive, got {winding}")
    return _connected(geometry, int(winding), _check_class(c, geometry), convention)


def clear_caches() -> None:
    for fn in (_open_coefficient, _inverse_coefficient, _connected):
        fn.cache_clear()
