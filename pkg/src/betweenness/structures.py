"""Finite relational structures and their builders.

Grid-like structures name their elements ``"i_j"`` with ``i`` the
horizontal and ``j`` the vertical coordinate, so isomorphisms used later
are explicit maps rather than searches.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, Mapping, Optional, Tuple

from .geometry import DimensionError, Point, between, format_rational, parse_rational
from .syntax import Vocabulary, is_set_name

BETA = "beta"


class StructureError(ValueError):
    pass


@dataclass(frozen=True)
class FinStructure:
    """A finite structure: element names, relations, unary predicates.

    ``arities`` records declared arities so that empty relations still
    carry one. ``geometry`` maps element names to points when the structure
    is induced by a point set; ``beta`` is then exactly the betweenness
    triples.
    """

    elements: Tuple[str, ...]
    relations: Mapping[str, FrozenSet[tuple]] = field(default_factory=dict)
    unary: Mapping[str, FrozenSet[str]] = field(default_factory=dict)
    geometry: Optional[Mapping[str, Point]] = None
    arities: Mapping[str, int] = field(default_factory=dict)

    def __post_init__(self):
        elements = tuple(self.elements)
        if len(set(elements)) != len(elements):
            raise StructureError("duplicate element names")
        object.__setattr__(self, "elements", elements)
        elset = set(elements)
        rels = {name: frozenset(tuple(t) for t in ts) for name, ts in self.relations.items()}
        arities = dict(self.arities)
        for name, ts in rels.items():
            lengths = {len(t) for t in ts}
            if name in arities:
                lengths.add(arities[name])
            if len(lengths) > 1:
                raise StructureError(f"relation {name} has tuples of lengths {sorted(lengths)}")
            if not lengths:
                raise StructureError(f"cannot infer arity of empty relation {name}")
            arities[name] = lengths.pop()
            for t in ts:
                if not set(t) <= elset:
                    raise StructureError(f"relation {name}: unknown element in {t}")
        unary = {name: frozenset(s) for name, s in self.unary.items()}
        for name, s in unary.items():
            if not is_set_name(name):
                raise StructureError(f"predicate name {name!r} must start uppercase")
            if name in rels:
                raise StructureError(f"{name} is both a relation and a predicate")
            if not s <= elset:
                raise StructureError(f"predicate {name}: unknown elements {sorted(s - elset)}")
        object.__setattr__(self, "relations", rels)
        object.__setattr__(self, "unary", unary)
        object.__setattr__(self, "arities", arities)
        if self.geometry is not None:
            geometry = dict(self.geometry)
            if set(geometry) != elset:
                raise StructureError("geometry must cover exactly the elements")
            object.__setattr__(self, "geometry", geometry)

    @property
    def vocabulary(self) -> Vocabulary:
        return Vocabulary(self.arities, frozenset(self.unary))

    def __len__(self) -> int:
        return len(self.elements)

    def rel(self, name: str) -> FrozenSet[tuple]:
        return self.relations[name]

    def pred(self, name: str) -> FrozenSet[str]:
        return self.unary[name]

    def with_relations(self, **rels) -> "FinStructure":
        new = dict(self.relations)
        new.update(rels)
        arities = {k: v for k, v in self.arities.items() if k not in rels or rels[k]}
        return FinStructure(self.elements, new, self.unary, self.geometry, arities)

    def reduct(self, relations: Iterable[str] = (), unary: Iterable[str] = ()) -> "FinStructure":
        relations, unary = set(relations), set(unary)
        return FinStructure(
            self.elements,
            {k: v for k, v in self.relations.items() if k in relations},
            {k: v for k, v in self.unary.items() if k in unary},
            self.geometry if BETA in relations else None,
            {k: v for k, v in self.arities.items() if k in relations},
        )


@dataclass(frozen=True)
class TorusSpec:
    m: int
    n: int

    def __post_init__(self):
        if self.m < 1 or self.n < 1:
            raise StructureError("torus dimensions must be positive")


def cell(i: int, j: int) -> str:
    return f"{i}_{j}"


def _grid_elements(m: int, n: int) -> Tuple[str, ...]:
    # row-major: j (row) outer, i (column) inner
    return tuple(cell(i, j) for j in range(n) for i in range(m))


def _grid_edges(m: int, n: int):
    h = {(cell(i, j), cell(i + 1, j)) for i in range(m - 1) for j in range(n)}
    v = {(cell(i, j), cell(i, j + 1)) for i in range(m) for j in range(n - 1)}
    return h, v


def build_torus(spec: TorusSpec) -> FinStructure:
    m, n = spec.m, spec.n
    h, v = _grid_edges(m, n)
    h |= {(cell(m - 1, j), cell(0, j)) for j in range(n)}
    v |= {(cell(i, n - 1), cell(i, 0)) for i in range(m)}
    return FinStructure(_grid_elements(m, n), {"H": h, "V": v}, arities={"H": 2, "V": 2})


def build_finite_grid(m: int, n: int) -> FinStructure:
    TorusSpec(m, n)
    h, v = _grid_edges(m, n)
    return FinStructure(_grid_elements(m, n), {"H": h, "V": v}, arities={"H": 2, "V": 2})


def build_recurrence_prefix(m: int, n: int) -> FinStructure:
    grid = build_finite_grid(m, n)
    r = {(cell(0, i), cell(0, j)) for i in range(n) for j in range(i + 1, n)}
    return FinStructure(grid.elements, {**grid.relations, "R": r}, arities={"H": 2, "V": 2, "R": 2})


def beta_triples(points: Mapping[str, Point]) -> FrozenSet[tuple]:
    names = list(points)
    return frozenset(
        (s, t, u)
        for s, t, u in itertools.product(names, repeat=3)
        if between(points[s], points[t], points[u])
    )


def geometric_structure(points, unary: Optional[Mapping[str, Iterable[str]]] = None) -> FinStructure:
    """Structure ``(T, beta)`` of a named point set.

    ``points`` is a mapping name -> Point or a sequence of (name, Point)
    pairs; element order follows the input order.
    """
    items = list(points.items()) if isinstance(points, Mapping) else list(points)
    names = [name for name, _ in items]
    if len(set(names)) != len(names):
        raise StructureError("duplicate point names")
    geometry = dict(items)
    if len({p.dim for p in geometry.values()}) > 1:
        raise DimensionError("all points must share one dimension")
    return FinStructure(
        tuple(names),
        {BETA: beta_triples(geometry)},
        {k: frozenset(v) for k, v in (unary or {}).items()},
        geometry,
        {BETA: 3},
    )


def expand(base: FinStructure, preds: Mapping[str, Iterable[str]]) -> FinStructure:
    """Add fresh unary predicates to ``base``."""
    unary = dict(base.unary)
    for name, members in preds.items():
        if name in unary or name in base.relations:
            raise StructureError(f"predicate name {name} already in use")
        members = frozenset(members)
        unknown = members - set(base.elements)
        if unknown:
            raise StructureError(f"unknown elements for {name}: {sorted(unknown)}")
        unary[name] = members
    return FinStructure(base.elements, base.relations, unary, base.geometry, base.arities)


# ---------------------------------------------------------------------------
# File format

def parse_structure(text: str) -> FinStructure:
    """Read the line-oriented structure format.

    Geometric files: ``dim n`` first, then ``point name r1 .. rn`` lines.
    Relational files: ``elements a b ..`` (optional), ``rel Name/k`` followed
    by ``tuple ..`` lines. Both may carry ``pred Name a b ..`` lines.
    """
    dim = None
    points: Dict[str, Point] = {}
    elements: list = []
    rels: Dict[str, set] = {}
    arities: Dict[str, int] = {}
    preds: Dict[str, list] = {}
    current = None
    first = True
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, *rest = line.split()
        try:
            if head == "dim":
                if not first:
                    raise StructureError("'dim' must be the first line")
                dim = int(rest[0])
            elif head == "point":
                if dim is None:
                    raise StructureError("'point' needs a preceding 'dim' line")
                name, coords = rest[0], rest[1:]
                if len(coords) != dim:
                    raise DimensionError(f"point {name} has {len(coords)} coordinates, expected {dim}")
                if name in points:
                    raise StructureError(f"duplicate point {name}")
                points[name] = Point(*(parse_rational(c) for c in coords))
            elif head == "elements":
                elements.extend(rest)
            elif head == "pred":
                preds.setdefault(rest[0], []).extend(rest[1:])
            elif head == "rel":
                name, arity = rest[0].split("/")
                current = name
                arities[name] = int(arity)
                rels.setdefault(name, set())
            elif head == "tuple":
                if current is None:
                    raise StructureError("'tuple' before any 'rel'")
                if len(rest) != arities[current]:
                    raise StructureError(f"tuple of length {len(rest)} for {current}/{arities[current]}")
                rels[current].add(tuple(rest))
            else:
                raise StructureError(f"unknown directive {head!r}")
        except (IndexError, ValueError) as exc:
            raise StructureError(f"line {lineno}: {exc}") from exc
        first = False
    if dim is not None:
        if rels:
            raise StructureError("geometric files cannot declare relations")
        return geometric_structure(points, preds)
    seen = list(dict.fromkeys(elements))
    for ts in rels.values():
        for t in sorted(ts):
            seen.extend(e for e in t if e not in seen)
    for members in preds.values():
        seen.extend(e for e in members if e not in seen)
    return FinStructure(tuple(seen), rels, preds, arities=arities)


def format_structure(s: FinStructure) -> str:
    lines = []
    if s.geometry is not None:
        dim = next(iter(s.geometry.values())).dim if s.geometry else 1
        lines.append(f"dim {dim}")
        for name in s.elements:
            coords = " ".join(format_rational(c) for c in s.geometry[name])
            lines.append(f"point {name} {coords}")
    else:
        lines.append("elements " + " ".join(s.elements))
        order = {e: k for k, e in enumerate(s.elements)}
        for name in sorted(s.relations):
            lines.append(f"rel {name}/{s.arities[name]}")
            for t in sorted(s.relations[name], key=lambda t: [order[e] for e in t]):
                lines.append("tuple " + " ".join(t))
    order = {e: k for k, e in enumerate(s.elements)}
    for name in sorted(s.unary):
        members = sorted(s.unary[name], key=order.__getitem__)
        lines.append(" ".join(["pred", name, *members]))
    return "\n".join(lines) + "\n"


def parse_dims(text: str) -> Tuple[int, int]:
    m, n = text.lower().split("x")
    return int(m), int(n)


def load_structure(ref: str) -> FinStructure:
    """Load a structure file or a ``builtin:torus:MxN`` / ``builtin:grid:MxN`` URI."""
    if ref.startswith("builtin:"):
        parts = ref.split(":")
        if len(parts) != 3:
            raise StructureError(f"bad builtin reference {ref!r}")
        kind, dims = parts[1], parts[2]
        m, n = parse_dims(dims)
        if kind == "torus":
            return build_torus(TorusSpec(m, n))
        if kind == "grid":
            return build_finite_grid(m, n)
        raise StructureError(f"unknown builtin structure {kind!r}")
    with open(ref) as fh:
        return parse_structure(fh.read())
