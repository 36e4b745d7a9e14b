import itertools
from fractions import Fraction

import pytest

from betweenness.evaluator import EvalBudget, evaluate
from betweenness.formulas import FINITE, make_frame_class_sentence
from betweenness.frames import (
    build_frame,
    check_torus_isomorphism,
    extract_interpreted_torus,
    find_torus_isomorphism,
    reduce_end_to_end,
    reduce_size,
)
from betweenness.geometry import LineSpec, Point, collinear_points, intersect_lines
from betweenness.structures import TorusSpec, build_torus, cell
from betweenness.tiling import TileSet, check_certificate

SIZES = [(m, n) for m in range(1, 5) for n in range(1, 5)]
AB = TileSet([("A", (0, 0, 1, 0)), ("B", (1, 0, 0, 0))])


def test_frame_2x2():
    b = build_frame(2, 2)
    assert len(b.structure) == 6
    assert b.structure.geometry[b.expected_map[(1, 1)]] == Point(Fraction(2, 3), Fraction(2, 3))


def test_frame_1x1():
    b = build_frame(1, 1)
    assert sorted(b.structure.geometry.values(), key=lambda p: p.coords) == [Point(0, 0), Point(0, 1), Point(1, 0)]


def test_frame_3x2_intersections():
    b = build_frame(3, 2)
    assert len(b.structure) == 8
    assert set(b.expected_map) == {(i, j) for i in range(3) for j in range(2)}
    geo = b.structure.geometry
    for i in (1, 2):
        # independent check: substitute into both line equations
        p = geo[b.expected_map[(i, 1)]]
        x, y = p.coords
        assert x / i + y / 2 == 1 and x / 3 + y / 1 == 1


def test_frame_rejects_zero():
    with pytest.raises(ValueError):
        build_frame(0, 2)


@pytest.mark.parametrize("m,n", SIZES)
def test_frame_invariants(m, n):
    b = build_frame(m, n)
    assert b.P & b.Q == {b.origo}
    assert len(b.P) == m + 1 and len(b.Q) == n + 1
    assert len(b.structure) == m * n + 2
    assert evaluate(b.structure, make_frame_class_sentence(FINITE))


@pytest.mark.parametrize("m,n", SIZES)
def test_torus_extraction(m, n):
    b = build_frame(m, n)
    result = check_torus_isomorphism(extract_interpreted_torus(b), TorusSpec(m, n), b.expected_map)
    assert result.ok, result.diagnostic


def test_extraction_shapes():
    one = extract_interpreted_torus(build_frame(1, 1))
    assert len(one) == 1
    (e,) = one.elements
    assert one.rel("H") == one.rel("V") == {(e, e)}
    b = build_frame(2, 2)
    two = extract_interpreted_torus(b)
    f = b.expected_map
    assert two.rel("H") == {(f[0, 0], f[1, 0]), (f[1, 0], f[0, 0]), (f[0, 1], f[1, 1]), (f[1, 1], f[0, 1])}


def test_isomorphism_mutation():
    b = build_frame(3, 2)
    extracted = extract_interpreted_torus(b)
    edge = sorted(extracted.rel("H"))[0]
    broken = extracted.with_relations(H=extracted.rel("H") - {edge})
    result = check_torus_isomorphism(broken, TorusSpec(3, 2), b.expected_map)
    assert not result.ok
    assert edge[0] in result.diagnostic and edge[1] in result.diagnostic


def test_isomorphism_wrong_size():
    b = build_frame(3, 2)
    result = check_torus_isomorphism(extract_interpreted_torus(b), TorusSpec(2, 3), b.expected_map)
    assert not result.ok and "mismatch" in result.diagnostic


def test_find_isomorphism():
    b = build_frame(3, 2)
    extracted = extract_interpreted_torus(b)
    f = find_torus_isomorphism(extracted, TorusSpec(3, 2))
    assert f is not None and check_torus_isomorphism(extracted, TorusSpec(3, 2), f).ok
    assert find_torus_isomorphism(extracted, TorusSpec(2, 3)) is None
    assert find_torus_isomorphism(extracted, TorusSpec(1, 6)) is None


def _cross_line_collinear_triples(m, n):
    b = build_frame(m, n)
    geo = b.structure.geometry
    interior = [(i, j) for i in range(1, m) for j in range(1, n)]
    out = []
    for trio in itertools.combinations(interior, 3):
        if len({c[0] for c in trio}) == 3 and len({c[1] for c in trio}) == 3:
            if collinear_points(*(geo[b.expected_map[c]] for c in trio)):
                out.append(trio)
    return out


def test_cross_line_collinearity_sweep():
    """Exhaustive up to 4x4. The symmetric 4x4 frame has one such triple on
    the diagonal y = x; it lies on no connecting line, so the frame
    formulas are unaffected (see the next test)."""
    found = {(m, n): _cross_line_collinear_triples(m, n) for m, n in SIZES}
    assert {k: v for k, v in found.items() if v} == {(4, 4): [((1, 1), (2, 2), (3, 3))]}


@pytest.mark.parametrize("m,n", SIZES)
def test_connecting_lines_carry_only_their_cells(m, n):
    """The property the no-domain-point-between clauses rely on."""
    b = build_frame(m, n)
    geo = b.structure.geometry
    pe, qe = geo[b.p_e], geo[b.q_e]
    for i in range(1, m):
        on = {k for k, e in b.expected_map.items() if collinear_points(Point(i, 0), qe, geo[e])}
        assert on == {(i, j) for j in range(n)}
    for j in range(1, n):
        on = {k for k, e in b.expected_map.items() if collinear_points(Point(0, j), pe, geo[e])}
        assert on == {(i, j) for i in range(m)}


def test_interior_points_on_their_lines():
    m, n = 4, 3
    b = build_frame(m, n)
    geo = b.structure.geometry
    for i in range(1, m):
        for j in range(1, n):
            p = geo[b.expected_map[(i, j)]]
            assert collinear_points(Point(i, 0), Point(0, n), p)
            assert collinear_points(Point(0, j), Point(m, 0), p)
            assert intersect_lines(LineSpec(Point(i, 0), Point(0, n)), LineSpec(Point(0, j), Point(m, 0))) == p


def test_reduce_examples():
    uniform = reduce_end_to_end(TileSet({"u": (0, 0, 0, 0)}), 2)
    assert uniform.agreement and uniform.first_success("logic") == uniform.first_success("solver") == (1, 1)
    bad = reduce_end_to_end(TileSet({"m": (0, 0, 1, 0)}), 2)
    assert bad.agreement and all(r.logic is False and r.solver is False for r in bad.sizes)
    ab = reduce_end_to_end(AB, 2)
    assert ab.agreement and ab.first_success("logic") == ab.first_success("solver") == (1, 2)
    assert ab.lines()[-1] == "agreement: true"
    assert ab.summary().startswith("agreement=true first_logic=1x2 first_solver=1x2")


def test_reduce_witness_is_a_tiling():
    r = reduce_size(AB, 1, 2)
    assert r.logic and r.witness is not None
    b = build_frame(1, 2)
    inv = {v: k for k, v in b.expected_map.items()}
    assignment = {cell(*inv[e]): name[2:] for name, members in r.witness.items() for e in members}
    assert check_certificate(AB, build_torus(TorusSpec(1, 2)), assignment) is None


def test_reduce_budget_skips():
    report = reduce_end_to_end(AB, 2, EvalBudget(max_set_domain=4))
    skipped = [r for r in report.sizes if r.skipped]
    assert skipped and all(r.m * r.n * 2 > 4 for r in skipped)
    assert report.agreement
    assert "skipped" in "\n".join(report.lines())
