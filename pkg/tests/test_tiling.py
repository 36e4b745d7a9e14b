import random

import pytest

from betweenness.evaluator import evaluate, expansion_search
from betweenness.structures import TorusSpec, build_finite_grid, build_recurrence_prefix, build_torus, expand
from betweenness.syntax import And, Not, Or, SetAtom, Vocabulary, free_variables, parse_formula, print_formula, symbols
from betweenness.tiling import (
    TileSet,
    TileSetError,
    check_certificate,
    format_tileset,
    make_recurrent_sentence,
    make_tiling_sentence,
    parse_tileset,
    periodic_sizes,
    pred_name,
    small_tile_corpus,
    solve_bounded_grid,
    solve_periodic,
    solve_torus,
)

UNIFORM = TileSet({"u": (0, 0, 0, 0)})
VMISMATCH = TileSet({"m": (0, 0, 1, 0)})
HMISMATCH = TileSet({"h": (0, 1, 0, 0)})
AB = TileSet([("A", (0, 0, 1, 0)), ("B", (1, 0, 0, 0))])


def _flatten(f, cls):
    return _flatten(f.left, cls) + _flatten(f.right, cls) if isinstance(f, cls) else [f]


def test_tiling_sentence_shape():
    f = make_tiling_sentence(AB)
    assert free_variables(f) == (frozenset(), frozenset({"T_A", "T_B"}))
    S3 = TileSet([("a", (0, 0, 0, 0)), ("b", (1, 1, 1, 1)), ("c", (0, 1, 0, 1))])
    exactly_one = make_tiling_sentence(S3).left.left.body
    disjuncts = _flatten(exactly_one, Or)
    assert len(disjuncts) == 3
    for d in disjuncts:
        parts = _flatten(d, And)
        assert isinstance(parts[0], SetAtom)
        assert len(parts) == 3 and all(isinstance(g, Not) for g in parts[1:])


def test_tiling_sentence_uniform_on_1x1():
    t = expand(build_torus(TorusSpec(1, 1)), {"T_u": {"0_0"}})
    assert evaluate(t, make_tiling_sentence(UNIFORM))


def test_vertical_mismatch_never_tiles():
    for m, n in periodic_sizes(3):
        assert solve_torus(VMISMATCH, m, n) is None
        if m * n <= 8:
            assert expansion_search(build_torus(TorusSpec(m, n)), make_tiling_sentence(VMISMATCH), ["T_m"]) is None


def test_solver_examples():
    cert = solve_torus(UNIFORM, 1, 1)
    assert cert.assignment == {"0_0": "u"}
    assert all(solve_torus(HMISMATCH, m, n) is None for m, n in periodic_sizes(3))
    cert = solve_torus(AB, 1, 2)
    assert cert.assignment == {"0_0": "A", "0_1": "B"}
    assert cert.render(1, 2) == "B\nA"


def test_periodic_examples():
    assert solve_periodic(UNIFORM, 3)[:2] == (1, 1)
    assert solve_periodic(VMISMATCH, 6) is None
    assert solve_periodic(AB, 3)[:2] == (1, 2)
    assert list(periodic_sizes(2)) == [(1, 1), (1, 2), (2, 1), (2, 2)]
    with pytest.raises(ValueError):
        periodic_sizes(0)


def test_bounded_grid():
    assert solve_bounded_grid(TileSet({"t": (0, 1, 0, 2)}), 1, 1) is not None
    assert solve_bounded_grid(HMISMATCH, 2, 1) is None
    assert solve_bounded_grid(HMISMATCH, 1, 2) is not None


def test_solver_is_lexicographically_first():
    S = TileSet([("a", (0, 0, 0, 0)), ("b", (0, 0, 0, 0))])
    assert set(solve_torus(S, 2, 2).assignment.values()) == {"a"}


def test_certificates_are_valid():
    for S in small_tile_corpus()[:60]:
        for m, n in periodic_sizes(2):
            cert = solve_torus(S, m, n)
            if cert is not None:
                assert check_certificate(S, build_torus(TorusSpec(m, n)), cert.assignment) is None
            cert = solve_bounded_grid(S, m, n)
            if cert is not None:
                assert check_certificate(S, build_finite_grid(m, n), cert.assignment) is None


def test_checker_finds_violation():
    t = build_torus(TorusSpec(1, 2))
    assert "V edge" in check_certificate(AB, t, {"0_0": "A", "0_1": "A"})
    assert "no valid tile" in check_certificate(AB, t, {"0_0": "A"})


def test_solver_logic_agreement_sample():
    rng = random.Random(0)
    corpus = small_tile_corpus()
    for S in rng.sample(corpus, 25):
        for m, n in [(1, 2), (2, 2)]:
            s = build_torus(TorusSpec(m, n))
            logic = expansion_search(s, make_tiling_sentence(S), S.predicates())
            assert (logic is not None) == (solve_torus(S, m, n) is not None)


def test_relabel_invariance():
    rng = random.Random(1)
    for S in rng.sample(small_tile_corpus(), 30):
        renamed = S.relabel({n: f"r{i}" for i, n in enumerate(S.names)})
        for m, n in periodic_sizes(2):
            assert (solve_torus(S, m, n) is None) == (solve_torus(renamed, m, n) is None)


def test_corpus_size():
    corpus = small_tile_corpus()
    assert len(corpus) == 16 + 16 * 15 // 2
    assert len({tuple(c for _, c in S) for S in corpus}) == len(corpus)


def test_recurrent_sentence():
    f = make_recurrent_sentence("A", AB)
    rels, sets = symbols(f)
    assert set(rels) == {"H", "V", "R"} and set(sets) == {"T_A", "T_B"}
    voc = Vocabulary({"H": 2, "V": 2, "R": 2})
    assert parse_formula(print_formula(f), voc) == f
    prefix = build_recurrence_prefix(2, 1)
    recur = f.right
    assert evaluate(expand(prefix, {"T_A": set(), "T_B": set()}), recur)
    with pytest.raises(TileSetError):
        make_recurrent_sentence("Z", AB)


def test_tileset_validation():
    with pytest.raises(TileSetError):
        TileSet({})
    with pytest.raises(TileSetError):
        TileSet([("a", (0, 0, 0, 0)), ("a", (1, 1, 1, 1))])
    with pytest.raises(TileSetError):
        TileSet({"a": (0, 0, 0)})
    with pytest.raises(TileSetError):
        TileSet({"a": (0, -1, 0, 0)})


def test_tileset_file_format():
    text = "# two tiles\ntile A 0 0 1 0\ntile B 1 0 0 0  # second\n"
    S = parse_tileset(text)
    assert S == AB
    assert parse_tileset(format_tileset(S)) == S
    for bad in ("tile A 0 0 1\n", "tiles A 0 0 1 0\n", "tile A 0 0 x 0\n"):
        with pytest.raises(TileSetError):
            parse_tileset(bad)


def test_pred_names():
    assert pred_name("A") == "T_A"
    assert SetAtom(pred_name("A"), "x").name == "T_A"
