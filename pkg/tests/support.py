"""Shared generators and independent oracles for the test suite."""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from betweenness.geometry import Point
from betweenness.structures import FinStructure
from betweenness.syntax import (
    And,
    Equals,
    ExistsFO,
    ExistsSet,
    ForallFO,
    ForallSet,
    Implies,
    Not,
    Or,
    RelAtom,
    SetAtom,
)


# -- geometry oracles ---------------------------------------------------------

def lambda_oracle(s: Point, t: Point, u: Point) -> bool:
    """Collect a lambda candidate from every coordinate and demand one
    consistent value in [0, 1]."""
    candidates = set()
    for si, ti, ui in zip(s.coords, t.coords, u.coords):
        if si == ui:
            if ti != si:
                return False
        else:
            candidates.add((ti - si) / (ui - si))
    if not candidates:
        return True  # s == u == t
    if len(candidates) > 1:
        return False
    lam = candidates.pop()
    return 0 <= lam <= 1


def metric_oracle(s: Point, t: Point, u: Point) -> bool:
    """d(s,u) = d(s,t) + d(t,u), decided on squared distances."""
    def d2(p, q):
        return sum((a - b) ** 2 for a, b in zip(p.coords, q.coords))

    a, b, c = d2(s, t), d2(t, u), d2(s, u)
    gap = c - a - b
    return gap >= 0 and gap * gap == 4 * a * b


def random_rational(rng: random.Random, num: int = 6, den: int = 4) -> Fraction:
    return Fraction(rng.randint(-num, num), rng.randint(1, den))


def random_point(rng: random.Random, dim: int) -> Point:
    return Point(*(random_rational(rng) for _ in range(dim)))


def random_triple(rng: random.Random, dim: int):
    """Random triples biased so that a good share are on a line."""
    s, u = random_point(rng, dim), random_point(rng, dim)
    roll = rng.random()
    if roll < 0.4:
        lam = Fraction(rng.randint(-4, 12), 8)
        t = Point(*(si + lam * (ui - si) for si, ui in zip(s.coords, u.coords)))
    elif roll < 0.5:
        t = rng.choice([s, u])
    elif roll < 0.55:
        u = s
        t = rng.choice([s, random_point(rng, dim)])
    else:
        t = random_point(rng, dim)
    return s, t, u


# -- formulas -----------------------------------------------------------------

FO_NAMES = ["x", "y", "z", "w"]
SET_NAMES = ["X", "Y"]


def random_formula(rng: random.Random, depth: int, relations=None, sets=("P",),
                   fo_names=FO_NAMES, set_vars=SET_NAMES, allow_sets=True):
    """A random formula of syntactic depth at most ``depth``.

    ``relations`` maps names to arities; ``sets`` are free unary symbols.
    Quantifiers bind names from ``fo_names`` / ``set_vars``.
    """
    relations = {"R": 2} if relations is None else relations

    def atom():
        kind = rng.random()
        if relations and kind < 0.5:
            name = rng.choice(sorted(relations))
            return RelAtom(name, tuple(rng.choice(fo_names) for _ in range(relations[name])))
        names = list(sets) + (list(set_vars) if allow_sets else [])
        if names and kind < 0.8:
            return SetAtom(rng.choice(names), rng.choice(fo_names))
        return Equals(rng.choice(fo_names), rng.choice(fo_names))

    def go(d):
        if d <= 1 or rng.random() < 0.2:
            return atom()
        k = rng.randrange(8 if allow_sets else 6)
        if k == 0:
            return Not(go(d - 1))
        if k in (1, 2, 3):
            return (And, Or, Implies)[k - 1](go(d - 1), go(d - 1))
        if k == 4:
            return ExistsFO(rng.choice(fo_names), go(d - 1))
        if k == 5:
            return ForallFO(rng.choice(fo_names), go(d - 1))
        cls = ExistsSet if k == 6 else ForallSet
        return cls(rng.choice(set_vars), go(d - 1), rng.random() < 0.5)

    return go(depth)


def close(f, fo_names=FO_NAMES, rng=None):
    """Bind every free first-order variable with a random quantifier."""
    from betweenness.syntax import free_variables

    rng = rng or random.Random(0)
    fo, _ = free_variables(f)
    for v in sorted(fo):
        f = (ExistsFO if rng.random() < 0.5 else ForallFO)(v, f)
    return f


def random_structure(rng: random.Random, size: int, relations=None) -> FinStructure:
    relations = {"E": 2} if relations is None else relations
    elements = tuple(f"e{i}" for i in range(size))
    rels = {}
    for name, arity in relations.items():
        rels[name] = {t for t in itertools.product(elements, repeat=arity) if rng.random() < 0.35}
    return FinStructure(elements, rels, {}, arities=dict(relations))
