"""Betweenness geometry, finite model checking and tiling reductions."""

from .evaluator import Assignment, BudgetExceeded, EvalBudget, Model, evaluate, expansion_search
from .frames import (
    FrameBundle,
    build_frame,
    check_torus_isomorphism,
    extract_interpreted_torus,
    find_torus_isomorphism,
    reduce_end_to_end,
)
from .geometry import LineSpec, Point, between, collinear_points, intersect_lines, strictly_between
from .interpretation import Interpretation, frame_interpretation, induced_structure, translate
from .structures import FinStructure, TorusSpec, build_finite_grid, build_torus, geometric_structure
from .syntax import Vocabulary, parse_formula, print_formula
from .tiling import TileSet, make_tiling_sentence, solve_bounded_grid, solve_periodic, solve_torus

__all__ = [
    "Assignment", "BudgetExceeded", "EvalBudget", "Model", "evaluate", "expansion_search",
    "FrameBundle", "build_frame", "check_torus_isomorphism", "extract_interpreted_torus",
    "find_torus_isomorphism", "reduce_end_to_end",
    "LineSpec", "Point", "between", "collinear_points", "intersect_lines", "strictly_between",
    "Interpretation", "frame_interpretation", "induced_structure", "translate",
    "FinStructure", "TorusSpec", "build_finite_grid", "build_torus", "geometric_structure",
    "Vocabulary", "parse_formula", "print_formula",
    "TileSet", "make_tiling_sentence", "solve_bounded_grid", "solve_periodic", "solve_torus",
]
