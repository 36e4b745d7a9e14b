"""Finite Cartesian frames in Q^2 and the periodic tiling reduction.

A frame of size m x n puts P on the x-axis and Q on the y-axis::

    P = {(i, 0) : 0 <= i <= m},  Q = {(0, j) : 0 <= j <= n}

with endpoints p_e = (m, 0), q_e = (0, n), and adds every intersection of
the line through (i, 0) and q_e with the line through (0, j) and p_e for
0 < i < m, 0 < j < n. Grid cell (i, j) is that intersection (or the axis
point when i or j is 0); element names follow the cell: ``f{i}_{j}``.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Tuple

from .evaluator import BudgetExceeded, DEFAULT_BUDGET, EvalBudget, Model, expansion_search
from .formulas import FINITE, make_frame_class_sentence
from .geometry import IDENTICAL, LineSpec, Point, intersect_lines
from .interpretation import frame_interpretation, induced_structure, translate
from .structures import FinStructure, TorusSpec, build_torus, cell, geometric_structure
from .syntax import And
from .tiling import TileSet, make_tiling_sentence, periodic_sizes, solve_torus

P_NAME, Q_NAME = "P", "Q"


@dataclass(frozen=True)
class FrameBundle:
    structure: FinStructure      # geometric, carries predicates P and Q
    P: frozenset
    Q: frozenset
    origo: str
    p_e: str
    q_e: str
    expected_map: Dict[Tuple[int, int], str]
    m: int
    n: int

    def torus_map(self) -> Dict[str, str]:
        """Torus element name -> frame element name."""
        return {cell(i, j): name for (i, j), name in self.expected_map.items()}


def frame_point(m: int, n: int, i: int, j: int) -> Point:
    if i == 0:
        return Point(0, j)
    if j == 0:
        return Point(i, 0)
    p = intersect_lines(LineSpec(Point(i, 0), Point(0, n)), LineSpec(Point(0, j), Point(m, 0)))
    if p is None or p is IDENTICAL:
        raise ArithmeticError(f"connecting lines for cell ({i},{j}) do not meet in a point")
    return p


def build_frame(m: int, n: int) -> FrameBundle:
    if m < 1 or n < 1:
        raise ValueError("frame dimensions must be positive")
    points: List[Tuple[str, Point]] = []
    expected = {}
    for j in range(n):
        for i in range(m):
            name = f"f{i}_{j}"
            points.append((name, frame_point(m, n, i, j)))
            expected[(i, j)] = name
    points += [("pe", Point(m, 0)), ("qe", Point(0, n))]
    P = frozenset([f"f{i}_0" for i in range(m)] + ["pe"])
    Q = frozenset([f"f0_{j}" for j in range(n)] + ["qe"])
    structure = geometric_structure(points, {P_NAME: P, Q_NAME: Q})
    return FrameBundle(structure, P, Q, "f0_0", "pe", "qe", expected, m, n)


def extract_interpreted_torus(bundle: FrameBundle, budget: EvalBudget = DEFAULT_BUDGET) -> FinStructure:
    return induced_structure(frame_interpretation(FINITE), bundle.structure, budget)


@dataclass
class IsoResult:
    ok: bool
    diagnostic: str = ""

    def __bool__(self) -> bool:
        return self.ok


def check_torus_isomorphism(extracted: FinStructure, spec: TorusSpec, expected_map: Mapping) -> IsoResult:
    """Check that ``expected_map`` (torus cell -> extracted element) is an
    isomorphism of {H, V}-structures."""
    torus = build_torus(spec)
    f = {}
    for key, value in expected_map.items():
        f[cell(*key) if isinstance(key, tuple) else key] = value
    if set(f) != set(torus.elements):
        missing = sorted(set(torus.elements) - set(f))
        extra = sorted(set(f) - set(torus.elements))
        return IsoResult(False, f"map domain mismatch: missing {missing}, extra {extra}")
    image = list(f.values())
    if len(set(image)) != len(image):
        return IsoResult(False, "map is not injective")
    if set(image) != set(extracted.elements):
        return IsoResult(False, f"map is not onto: unmatched {sorted(set(extracted.elements) - set(image))}"
                                f", foreign {sorted(set(image) - set(extracted.elements))}")
    for rel in ("H", "V"):
        theirs = extracted.relations.get(rel, frozenset())
        ours = torus.relations[rel]
        for u in torus.elements:
            for v in torus.elements:
                a, b = (u, v) in ours, (f[u], f[v]) in theirs
                if a != b:
                    side = "missing in extracted" if a else "extra in extracted"
                    return IsoResult(False, f"{rel}({u},{v}) vs {rel}({f[u]},{f[v]}): {side}")
    return IsoResult(True, "isomorphism verified")


def find_torus_isomorphism(extracted: FinStructure, spec: TorusSpec) -> Optional[Dict[str, str]]:
    """Search for an isomorphism from the torus onto ``extracted``.

    Torus H and V are permutations, so fixing the image of cell 0_0
    determines the rest.
    """
    if len(extracted) != spec.m * spec.n:
        return None
    h = {}
    v = {}
    for rel, succ in (("H", h), ("V", v)):
        for a, b in extracted.relations.get(rel, ()):
            if a in succ:
                return None
            succ[a] = b
    for start in extracted.elements:
        f = {}
        row = start
        ok = True
        for j in range(spec.n):
            x = row
            for i in range(spec.m):
                f[cell(i, j)] = x
                x = h.get(x)
                if x is None:
                    ok = False
                    break
            if not ok:
                break
            row = v.get(row)
            if row is None:
                ok = False
                break
        if ok and check_torus_isomorphism(extracted, spec, f):
            return f
    return None


# ---------------------------------------------------------------------------
# The reduction

@dataclass
class SizeResult:
    m: int
    n: int
    logic: Optional[bool] = None
    solver: Optional[bool] = None
    witness: Optional[Dict[str, frozenset]] = None
    skipped: str = ""
    seconds: float = 0.0

    @property
    def agrees(self) -> bool:
        return self.skipped != "" or self.logic == self.solver


@dataclass
class ReductionReport:
    tiles: TileSet
    bound: int
    sizes: List[SizeResult] = field(default_factory=list)

    @property
    def agreement(self) -> bool:
        return all(r.agrees for r in self.sizes if not r.skipped)

    def first_success(self, column: str = "logic") -> Optional[Tuple[int, int]]:
        for r in self.sizes:
            if not r.skipped and getattr(r, column):
                return r.m, r.n
        return None

    def lines(self) -> List[str]:
        out = [f"tiles: {' '.join(self.tiles.names)}  bound: {self.bound}"]
        for r in self.sizes:
            if r.skipped:
                out.append(f"{r.m}x{r.n}: skipped ({r.skipped})")
            else:
                out.append(f"{r.m}x{r.n}: logic={'tilable' if r.logic else 'absent'} "
                           f"solver={'tilable' if r.solver else 'absent'} "
                           f"{'agree' if r.agrees else 'DISAGREE'}")
        out.append(f"agreement: {str(self.agreement).lower()}")
        return out

    def summary(self) -> str:
        logic, solver = self.first_success("logic"), self.first_success("solver")
        fmt = lambda s: "none" if s is None else f"{s[0]}x{s[1]}"
        return (f"agreement={str(self.agreement).lower()} first_logic={fmt(logic)} "
                f"first_solver={fmt(solver)} sizes={len(self.sizes)} "
                f"skipped={sum(1 for r in self.sizes if r.skipped)}\n")


def reduction_sentence(S: TileSet):
    """``fcf & J(phi_S)``, with the frame predicates fixed by the structure."""
    tiling = make_tiling_sentence(S)
    return And(make_frame_class_sentence(FINITE), translate(frame_interpretation(FINITE), tiling))


def reduce_size(S: TileSet, m: int, n: int, budget: EvalBudget = DEFAULT_BUDGET, sentence=None) -> SizeResult:
    start = time.perf_counter()
    result = SizeResult(m, n)
    bundle = build_frame(m, n)
    sentence = sentence if sentence is not None else reduction_sentence(S)
    preds = S.predicates()
    try:
        model = Model(bundle.structure, budget)
        compiled = model.compile(sentence, free_sets=preds)
        dom = model.compile(frame_interpretation(FINITE).dom_formula)
        domain = [e for e in bundle.structure.elements if dom({"u": e})]
        witness = expansion_search(bundle.structure, sentence, preds, budget, domain=domain, compiled=compiled)
    except BudgetExceeded as exc:
        result.skipped = str(exc)
    else:
        result.logic = witness is not None
        result.witness = witness
    result.solver = solve_torus(S, m, n) is not None
    result.seconds = time.perf_counter() - start
    return result


def reduce_end_to_end(S: TileSet, bound: int, budget: EvalBudget = DEFAULT_BUDGET) -> ReductionReport:
    """Run the finite-frame reduction and the torus solver size by size."""
    report = ReductionReport(S, bound)
    sentence = reduction_sentence(S)
    for m, n in periodic_sizes(bound):
        report.sizes.append(reduce_size(S, m, n, budget, sentence))
    return report
