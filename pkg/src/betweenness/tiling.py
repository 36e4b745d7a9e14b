"""Wang tiles: tile sets, tiling sentences and combinatorial solvers.

Colours are ordered (top, right, bottom, left). A tile named ``a`` is
represented in formulas by the unary predicate ``T_a``.

The solvers here never touch formulas; they are independent backtracking
searches over cells in row-major order (row ``j`` outer, column ``i``
inner) trying tiles in file order, so the certificate returned is the
lexicographically first one.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

from .structures import FinStructure, TorusSpec, build_finite_grid, build_torus, cell
from .syntax import (
    And,
    ExistsFO,
    ForallFO,
    Formula,
    Implies,
    Not,
    Or,
    RelAtom,
    SetAtom,
    conj,
    disj,
    falsum,
    forall,
)

TOP, RIGHT, BOTTOM, LEFT = range(4)

_NAME_RE = re.compile(r"^[A-Za-z0-9_]+$")


class TileSetError(ValueError):
    pass


@dataclass(frozen=True)
class TileSet:
    tiles: Tuple[Tuple[str, Tuple[int, int, int, int]], ...]

    def __init__(self, tiles):
        items = list(tiles.items()) if isinstance(tiles, Mapping) else list(tiles)
        if not items:
            raise TileSetError("a tile set must be nonempty")
        names = [name for name, _ in items]
        if len(set(names)) != len(names):
            raise TileSetError("tile names must be unique")
        clean = []
        for name, colours in items:
            if not _NAME_RE.match(name):
                raise TileSetError(f"bad tile name {name!r}")
            colours = tuple(int(c) for c in colours)
            if len(colours) != 4 or min(colours) < 0:
                raise TileSetError(f"tile {name} needs four natural-number colours")
            clean.append((name, colours))
        object.__setattr__(self, "tiles", tuple(clean))

    def __iter__(self):
        return iter(self.tiles)

    def __len__(self) -> int:
        return len(self.tiles)

    @property
    def names(self) -> List[str]:
        return [name for name, _ in self.tiles]

    def colours(self, name: str) -> Tuple[int, int, int, int]:
        return dict(self.tiles)[name]

    def predicates(self) -> List[str]:
        return [pred_name(name) for name in self.names]

    def relabel(self, mapping: Mapping[str, str]) -> "TileSet":
        return TileSet([(mapping.get(n, n), c) for n, c in self.tiles])


def pred_name(tile: str) -> str:
    return f"T_{tile}"


@dataclass(frozen=True)
class TilingCertificate:
    assignment: Dict[str, str]
    structure: FinStructure

    def render(self, m: int, n: int) -> str:
        """Rows top to bottom, as a text grid of tile names."""
        rows = []
        for j in reversed(range(n)):
            rows.append(" ".join(self.assignment[cell(i, j)] for i in range(m)))
        return "\n".join(rows)


# ---------------------------------------------------------------------------
# Sentences

def _exactly_one(S: TileSet, x: str) -> Formula:
    preds = S.predicates()
    options = []
    for p in preds:
        others = [Not(SetAtom(q, x)) for q in preds if q != p]
        options.append(conj(SetAtom(p, x), *others))
    return disj(*options)


def _matching(S: TileSet, rel: str, out_side: int, in_side: int, x: str, y: str) -> Formula:
    pairs = [
        And(SetAtom(pred_name(a), x), SetAtom(pred_name(b), y))
        for (a, ca), (b, cb) in itertools.product(S.tiles, repeat=2)
        if ca[out_side] == cb[in_side]
    ]
    allowed = disj(*pairs) if pairs else falsum(x)
    return forall([x, y], Implies(RelAtom(rel, (x, y)), allowed))


def make_tiling_sentence(S: TileSet) -> Formula:
    """Sentence over {H, V} and the tile predicates expressing an S-tiling."""
    if not len(S):
        raise TileSetError("empty tile set")
    return conj(
        ForallFO("x", _exactly_one(S, "x")),
        _matching(S, "H", RIGHT, LEFT, "x", "y"),
        _matching(S, "V", TOP, BOTTOM, "x", "y"),
    )


def make_recurrent_sentence(t: str, S: TileSet) -> Formula:
    """Tiling sentence plus: every cell of the R-ordered column has an
    R-later cell carrying tile ``t``."""
    if t not in S.names:
        raise TileSetError(f"tile {t!r} is not in the set")
    in_column = ExistsFO("y", Or(RelAtom("R", ("x", "y")), RelAtom("R", ("y", "x"))))
    recurs = ExistsFO("y", And(RelAtom("R", ("x", "y")), SetAtom(pred_name(t), "y")))
    return And(make_tiling_sentence(S), ForallFO("x", Implies(in_column, recurs)))


# ---------------------------------------------------------------------------
# Solvers

def check_certificate(S: TileSet, structure: FinStructure, assignment: Mapping[str, str]) -> Optional[str]:
    """Walk every H and V edge; return a description of the first violation."""
    colours = dict(S.tiles)
    for e in structure.elements:
        if assignment.get(e) not in colours:
            return f"element {e} has no valid tile"
    for u, v in sorted(structure.relations.get("H", ())):
        if colours[assignment[u]][RIGHT] != colours[assignment[v]][LEFT]:
            return f"H edge {u}->{v}: right {colours[assignment[u]][RIGHT]} != left {colours[assignment[v]][LEFT]}"
    for u, v in sorted(structure.relations.get("V", ())):
        if colours[assignment[u]][TOP] != colours[assignment[v]][BOTTOM]:
            return f"V edge {u}->{v}: top {colours[assignment[u]][TOP]} != bottom {colours[assignment[v]][BOTTOM]}"
    return None


def solve_structure(S: TileSet, structure: FinStructure) -> Optional[TilingCertificate]:
    """First tiling of an {H, V}-structure in element order / tile order."""
    order = list(structure.elements)
    pos = {e: k for k, e in enumerate(order)}
    # constraints checked when the later endpoint of an edge is placed
    checks: List[List[Tuple[int, int, int, int]]] = [[] for _ in order]
    for rel, out_side, in_side in (("H", RIGHT, LEFT), ("V", TOP, BOTTOM)):
        for u, v in structure.relations.get(rel, ()):
            pu, pv = pos[u], pos[v]
            checks[max(pu, pv)].append((pu, pv, out_side, in_side))
    tiles = list(S.tiles)
    chosen: List[Optional[Tuple[int, int, int, int]]] = [None] * len(order)
    names: List[Optional[str]] = [None] * len(order)

    def place(k: int) -> bool:
        if k == len(order):
            return True
        for name, col in tiles:
            chosen[k] = col
            if all(chosen[pu][o] == chosen[pv][i] for pu, pv, o, i in checks[k]):
                names[k] = name
                if place(k + 1):
                    return True
        chosen[k] = None
        return False

    if not place(0):
        return None
    return TilingCertificate(dict(zip(order, names)), structure)


def solve_torus(S: TileSet, m: int, n: int) -> Optional[TilingCertificate]:
    return solve_structure(S, build_torus(TorusSpec(m, n)))


def solve_bounded_grid(S: TileSet, m: int, n: int) -> Optional[TilingCertificate]:
    return solve_structure(S, build_finite_grid(m, n))


def periodic_sizes(bound: int) -> Iterator[Tuple[int, int]]:
    """Sizes with max(m, n) <= bound, by m + n then m."""
    if bound < 1:
        raise ValueError("bound must be >= 1")
    sizes = [(m, n) for m in range(1, bound + 1) for n in range(1, bound + 1)]
    return iter(sorted(sizes, key=lambda mn: (mn[0] + mn[1], mn[0])))


def solve_periodic(S: TileSet, bound: int) -> Optional[Tuple[int, int, TilingCertificate]]:
    for m, n in periodic_sizes(bound):
        cert = solve_torus(S, m, n)
        if cert is not None:
            return m, n, cert
    return None


# ---------------------------------------------------------------------------
# File format and corpora

def parse_tileset(text: str) -> TileSet:
    """Lines ``tile <name> <top> <right> <bottom> <left>``; '#' comments."""
    tiles = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] != "tile" or len(parts) != 6:
            raise TileSetError(f"line {lineno}: expected 'tile <name> <top> <right> <bottom> <left>'")
        try:
            colours = tuple(int(c) for c in parts[2:])
        except ValueError:
            raise TileSetError(f"line {lineno}: colours must be natural numbers") from None
        tiles.append((parts[1], colours))
    return TileSet(tiles)


def format_tileset(S: TileSet) -> str:
    return "".join(f"tile {name} {' '.join(map(str, c))}\n" for name, c in S.tiles)


def load_tileset(path: str) -> TileSet:
    with open(path) as fh:
        return parse_tileset(fh.read())


def all_tiles(colours: Sequence[int] = (0, 1)) -> List[Tuple[int, int, int, int]]:
    return list(itertools.product(colours, repeat=4))


def small_tile_corpus(colours: Sequence[int] = (0, 1), max_tiles: int = 2) -> List[TileSet]:
    """Every nonempty set of at most ``max_tiles`` distinct tiles."""
    kinds = all_tiles(colours)
    out = []
    for k in range(1, max_tiles + 1):
        for combo in itertools.combinations(kinds, k):
            out.append(TileSet([(f"t{''.join(map(str, c))}", c) for c in combo]))
    return out
