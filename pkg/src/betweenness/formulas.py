"""Constructors for the betweenness formulas used by the reductions.

All constructors return :class:`~betweenness.syntax.Formula` values over the
vocabulary ``{beta}`` plus the named unary predicates. Bound variables are
drawn from a :class:`~betweenness.syntax.Fresh` generator (``v0, v1, ...``)
so that nested definitions never capture each other's variables; free
variables keep the names given by the caller.

Membership in a point set is passed around as a callable ``mem(v)`` that
returns the formula "v belongs to the set". This lets the same clause be
reused for ``P`` and for ``P`` minus an endpoint.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Dict, Optional, Sequence

from .structures import BETA
from .syntax import (
    And,
    Equals,
    ExistsFO,
    ExistsSet,
    ForallFO,
    ForallSet,
    Formula,
    Fresh,
    Implies,
    Not,
    Or,
    RelAtom,
    SetAtom,
    ATOMS,
    BINARY,
    all_names,
    conj,
    disj,
    exists,
    forall,
    neq,
)

Mem = Callable[[str], Formula]

FINITE = "finite"
INFINITE = "infinite"


def beta(a: str, b: str, c: str) -> Formula:
    return RelAtom(BETA, (a, b, c))


def strict_beta(a: str, b: str, c: str) -> Formula:
    """beta*(a,b,c): beta(a,b,c) with a != b and b != c."""
    return conj(beta(a, b, c), neq(a, b), neq(b, c))


def member(name: str) -> Mem:
    return lambda v: SetAtom(name, v)


def _fresh(fresh: Optional[Fresh], *free: str) -> Fresh:
    return fresh if fresh is not None else Fresh(free)


# ---------------------------------------------------------------------------
# Lines, flats, triangles

def collinear(x: str, y: str, z: str) -> Formula:
    return disj(beta(x, y, z), beta(x, z, y), beta(y, x, z))


def parallel(x: str, y: str, t: str, k: str, fresh: Optional[Fresh] = None) -> Formula:
    """Lines through x,y and t,k are parallel (or equal)."""
    fresh = _fresh(fresh, x, y, t, k)
    z, z1, z2 = fresh(), fresh(), fresh()
    same_line = And(collinear(x, y, t), collinear(x, y, k))
    disjoint = Not(ExistsFO(z, And(collinear(x, y, z), collinear(t, k, z))))
    coplanar = exists(
        [z1, z2],
        conj(neq(x, z1), collinear(x, y, z1), collinear(x, t, z2), collinear(z1, z2, k)),
    )
    return conj(neq(x, y), neq(t, k), Or(same_line, And(disjoint, coplanar)))


def basis(xs: Sequence[str], fresh: Optional[Fresh] = None) -> Formula:
    """Vectors x0->x1, ..., x0->xk are linearly independent."""
    fresh = _fresh(fresh, *xs)
    if len(xs) == 1:
        return Equals(xs[0], xs[0])
    return And(basis(xs[:-1], fresh), Not(flat(xs[:-1], xs[-1], fresh)))


def flat(xs: Sequence[str], z: str, fresh: Optional[Fresh] = None) -> Formula:
    """z lies in the affine span of x0..xk (with x0 as origin)."""
    fresh = _fresh(fresh, *xs, z)
    k = len(xs) - 1
    if k == 0:
        return Equals(xs[0], z)
    ys = fresh.many(k + 1)
    steps = [Or(Equals(ys[i], ys[i + 1]), parallel(xs[0], xs[i + 1], ys[i], ys[i + 1], fresh)) for i in range(k)]
    chain = exists(ys, conj(Equals(ys[0], xs[0]), Equals(ys[k], z), *steps))
    return And(basis(xs, fresh), chain)


def opentriangle(xs: Sequence[str], z: str, fresh: Optional[Fresh] = None) -> Formula:
    """z is strictly inside the k-simplex with vertices x0..xk (k >= 1)."""
    if len(xs) < 2:
        raise ValueError("opentriangle needs k >= 1")
    fresh = _fresh(fresh, *xs, z)
    if len(xs) == 2:
        return strict_beta(xs[0], z, xs[1])
    y = fresh()
    inner = And(opentriangle(xs[:-1], y, fresh), strict_beta(y, z, xs[-1]))
    return And(basis(xs, fresh), ExistsFO(y, inner))


def xs_names(k: int, stem: str = "x") -> list:
    return [f"{stem}{i}" for i in range(k + 1)]


def make_collinear() -> Formula:
    return collinear("x", "y", "z")


def make_parallel() -> Formula:
    return parallel("x", "y", "t", "k")


def make_basis_and_flat(k: int):
    """``(basis_k(x0..xk), flat_k(x0..xk, z))``."""
    if k < 0:
        raise ValueError("k must be non-negative")
    xs = xs_names(k)
    return basis(xs, Fresh(xs)), flat(xs, "z", Fresh(xs + ["z"]))


def make_opentriangle(k: int) -> Formula:
    if k < 1:
        raise ValueError("opentriangle needs k >= 1")
    xs = xs_names(k)
    return opentriangle(xs, "z", Fresh(xs + ["z"]))


# ---------------------------------------------------------------------------
# Finiteness of a predicate over (R^n, beta)

def sepr(x: str, mem: Mem, n: int, fresh: Fresh) -> Formula:
    """x sits in an open n-simplex containing no other member of the set."""
    xs = fresh.many(n + 1)
    y = fresh()
    guard = And(opentriangle(xs, y, fresh), neq(y, x))
    return exists(xs, And(opentriangle(xs, x, fresh), ForallFO(y, Implies(guard, Not(mem(y))))))


@dataclass(frozen=True)
class FinitenessParts:
    closed: Formula      # complement of P is open
    isolated: Formula    # P consists of isolated points
    bounded: Formula     # an n-simplex surrounds P

    @property
    def sentence(self) -> Formula:
        return conj(self.closed, self.isolated, self.bounded)


def finiteness_parts(n: int, pred: str = "P", fresh: Optional[Fresh] = None) -> FinitenessParts:
    if n < 1:
        raise ValueError("ambient dimension must be >= 1")
    fresh = fresh or Fresh()
    mem = member(pred)
    x1, x2 = fresh(), fresh()
    phi1 = ForallFO(x1, Implies(Not(mem(x1)), sepr(x1, mem, n, fresh)))
    phi2 = ForallFO(x2, Implies(mem(x2), sepr(x2, mem, n, fresh)))
    xs = fresh.many(n + 1)
    y = fresh()
    phi3 = exists(xs, And(basis(xs, fresh), ForallFO(y, Implies(mem(y), opentriangle(xs, y, fresh)))))
    return FinitenessParts(phi1, phi2, phi3)


def make_finiteness_sentence(n: int, pred: str = "P") -> Formula:
    """Closed {beta, pred}-sentence: pred is closed, discrete and bounded."""
    return finiteness_parts(n, pred).sentence


def weak_to_strong(f: Formula, n: int) -> Formula:
    """Replace weak set quantifiers by strong ones guarded by finiteness."""
    fresh = Fresh(all_names(f))
    return _w2s(f, n, fresh)


def _w2s(f: Formula, n: int, fresh: Fresh) -> Formula:
    if isinstance(f, ATOMS):
        return f
    if isinstance(f, Not):
        return Not(_w2s(f.body, n, fresh))
    if isinstance(f, BINARY):
        return type(f)(_w2s(f.left, n, fresh), _w2s(f.right, n, fresh))
    body = _w2s(f.body, n, fresh)
    if isinstance(f, (ExistsSet, ForallSet)):
        if not f.weak:
            return type(f)(f.var, body, False)
        finite = finiteness_parts(n, f.var, fresh).sentence
        if isinstance(f, ExistsSet):
            return ExistsSet(f.var, And(finite, body), False)
        return ForallSet(f.var, Implies(finite, body), False)
    return type(f)(f.var, body)


# ---------------------------------------------------------------------------
# Sequences on lines

def sequence(mem: Mem, fresh: Fresh) -> Formula:
    """The set is nonempty and collinear."""
    w, x, y, z = fresh(), fresh(), fresh(), fresh()
    return And(
        ExistsFO(w, mem(w)),
        forall([x, y, z], Implies(conj(mem(x), mem(y), mem(z)), collinear(x, y, z))),
    )


def discretely_spaced(mem: Mem, fresh: Fresh) -> Formula:
    s, t, u, r = fresh(), fresh(), fresh(), fresh()
    connected = ForallFO(r, Implies(strict_beta(s, r, u), Not(mem(r))))
    step = ExistsFO(u, conj(neq(u, s), beta(s, u, t), connected))
    return forall([s, t], Implies(conj(mem(s), mem(t), neq(s, t)), step))


def base_point(s: str, mem: Mem, fresh: Fresh) -> Formula:
    u, v = fresh(), fresh()
    return ForallFO(u, Implies(mem(u), ExistsFO(v, conj(mem(v), neq(v, u), beta(s, u, v)))))


def discretely_infinite(mem: Mem, fresh: Fresh) -> Formula:
    s = fresh()
    return ExistsFO(s, And(mem(s), base_point(s, mem, fresh)))


def zero_point(s: str, mem: Mem, fresh: Fresh) -> Formula:
    u, v = fresh(), fresh()
    return And(
        mem(s),
        Not(exists([u, v], conj(mem(u), neq(u, s), mem(v), neq(v, s), beta(u, s, v)))),
    )


def has_zero(mem: Mem, fresh: Fresh) -> Formula:
    s = fresh()
    return ExistsFO(s, zero_point(s, mem, fresh))


def omega_gap(mem: Mem, fresh: Fresh) -> Formula:
    r, s, u, s2, u2, v = (fresh() for _ in range(6))
    inside = exists([s, u], conj(mem(s), neq(s, r), mem(u), neq(u, r), beta(s, r, u)))
    gap = ForallFO(v, Implies(And(neq(v, r), strict_beta(s2, v, u2)), Not(mem(v))))
    tight = exists([s2, u2], conj(mem(s2), neq(s2, r), mem(u2), neq(u2, r), beta(s2, r, u2), gap))
    return ForallFO(r, Implies(inside, tight))


def omega_parts(mem: Mem, fresh: Fresh) -> Dict[str, Formula]:
    return {
        "sequence": sequence(mem, fresh),
        "discretely_spaced": discretely_spaced(mem, fresh),
        "discretely_infinite": discretely_infinite(mem, fresh),
        "zero": has_zero(mem, fresh),
        "gap": omega_gap(mem, fresh),
    }


def omega_sentence(mem: Mem, fresh: Fresh) -> Formula:
    return conj(*omega_parts(mem, fresh).values())


def make_omega_sequence_sentence(pred: str = "P") -> Formula:
    """pred is an omega-like sequence (never true on a finite structure)."""
    return omega_sentence(member(pred), Fresh())


# ---------------------------------------------------------------------------
# Cartesian frames

def endpoint_of(x: str, own: str, other: str, fresh: Fresh) -> Formula:
    """``end_P(P, Q, x)``: x is in P, not in Q, and not strictly inside P."""
    y, z = fresh(), fresh()
    mem = member(own)
    return conj(
        mem(x),
        Not(SetAtom(other, x)),
        Not(exists([y, z], conj(mem(y), mem(z), strict_beta(y, x, z)))),
    )


class _FrameBuilder:
    """Builds the frame formulas with every p_e / q_e expanded in place."""

    def __init__(self, fresh: Fresh, p: str = "P", q: str = "Q"):
        self.fresh = fresh
        self.p, self.q = p, q

    def end_p(self, x: str) -> Formula:
        return endpoint_of(x, self.p, self.q, self.fresh)

    def end_q(self, x: str) -> Formula:
        return endpoint_of(x, self.q, self.p, self.fresh)

    def at_pe(self, body: Callable[[str], Formula]) -> Formula:
        z = self.fresh()
        return ExistsFO(z, And(self.end_p(z), body(z)))

    def at_qe(self, body: Callable[[str], Formula]) -> Formula:
        z = self.fresh()
        return ExistsFO(z, And(self.end_q(z), body(z)))

    def dom(self, u: str) -> Formula:
        P, Q = member(self.p), member(self.q)
        x, y = self.fresh(), self.fresh()
        crossing = exists([x, y], conj(
            P(x), self.at_pe(lambda z: neq(x, z)),
            Q(y), self.at_qe(lambda z: neq(y, z)),
            self.at_qe(lambda z: beta(x, u, z)),
            self.at_pe(lambda z: beta(y, u, z)),
        ))
        return conj(
            self.at_pe(lambda z: neq(u, z)),
            self.at_qe(lambda z: neq(u, z)),
            disj(P(u), Q(u), crossing),
        )

    def _no_domain_between(self, u: str, v: str) -> Formula:
        r = self.fresh()
        return ForallFO(r, Implies(strict_beta(u, r, v), Not(self.dom(r))))

    def h(self, u: str, v: str) -> Formula:
        x = self.fresh()
        step = ExistsFO(x, conj(SetAtom(self.q, x), beta(x, u, v), self.at_pe(lambda z: strict_beta(u, v, z))))
        return And(step, self._no_domain_between(u, v))

    def v(self, u: str, v: str) -> Formula:
        x = self.fresh()
        step = ExistsFO(x, conj(SetAtom(self.p, x), beta(x, u, v), self.at_qe(lambda z: strict_beta(u, v, z))))
        return And(step, self._no_domain_between(u, v))

    def h_fin(self, u: str, v: str) -> Formula:
        x = self.fresh()
        wrap = conj(
            SetAtom(self.q, v),
            self.at_pe(lambda z: beta(v, u, z)),
            ForallFO(x, Implies(self.at_pe(lambda z: strict_beta(u, x, z)), Not(self.dom(x)))),
        )
        return Or(self.h(u, v), wrap)

    def v_fin(self, u: str, v: str) -> Formula:
        x = self.fresh()
        wrap = conj(
            SetAtom(self.p, v),
            self.at_qe(lambda z: beta(v, u, z)),
            ForallFO(x, Implies(self.at_qe(lambda z: strict_beta(u, x, z)), Not(self.dom(x)))),
        )
        return Or(self.v(u, v), wrap)


@dataclass(frozen=True)
class FrameFormulas:
    end_p: Formula   # free x
    end_q: Formula   # free x
    dom: Formula     # free u
    h: Formula       # free u, v
    v: Formula       # free u, v
    kind: str


def make_frame_formulas(kind: str = FINITE, p: str = "P", q: str = "Q") -> FrameFormulas:
    if kind not in (FINITE, INFINITE):
        raise ValueError(f"kind must be {FINITE!r} or {INFINITE!r}")
    b = _FrameBuilder(Fresh(["x", "u", "v"]), p, q)
    if kind == FINITE:
        h, v = b.h_fin("u", "v"), b.v_fin("u", "v")
    else:
        h, v = b.h("u", "v"), b.v("u", "v")
    return FrameFormulas(b.end_p("x"), b.end_q("x"), b.dom("u"), h, v, kind)


def _without(mem: Mem, e: str) -> Mem:
    return lambda v: And(mem(v), neq(v, e))


def endpoint_conditions(x: str, mem: Mem, fresh: Fresh) -> Formula:
    """x is not strictly inside the set, and every member beyond x has a
    member strictly between it and x."""
    s, t, y, z, v = (fresh() for _ in range(5))
    not_inside = Not(exists([s, t], conj(mem(s), mem(t), strict_beta(s, x, t))))
    dense = forall([y, z], Implies(
        conj(mem(y), mem(z), strict_beta(x, y, z)),
        ExistsFO(v, And(mem(v), strict_beta(x, v, y))),
    ))
    return conj(mem(x), not_inside, dense)


def omega_with_endpoint(e: str, mem: Mem, fresh: Fresh) -> Formula:
    """mem minus e is omega-like and e lies beyond all of it from its zero."""
    rest = _without(mem, e)
    z0, q = fresh(), fresh()
    beyond = ExistsFO(z0, And(zero_point(z0, rest, fresh),
                              ForallFO(q, Implies(rest(q), beta(z0, q, e)))))
    return conj(endpoint_conditions(e, mem, fresh), omega_sentence(rest, fresh), beyond)


def _lines_differ(P: Mem, Q: Mem, fresh: Fresh) -> Formula:
    a, b, c = fresh(), fresh(), fresh()
    return exists([a, b, c], conj(P(a), P(b), neq(a, b), Q(c), Not(collinear(a, b, c))))


def _non_singleton(mem: Mem, fresh: Fresh) -> Formula:
    a, b = fresh(), fresh()
    return exists([a, b], conj(mem(a), mem(b), neq(a, b)))


def _lines_intersect(a: str, b: str, c: str, d: str, fresh: Fresh) -> Formula:
    """The T-lines through a,b and through c,d are distinct and meet in T."""
    w = fresh()
    return conj(
        neq(a, b), neq(c, d),
        Not(And(collinear(a, b, c), collinear(a, b, d))),
        ExistsFO(w, And(collinear(a, b, w), collinear(c, d, w))),
    )


def make_frame_class_sentence(kind: str = FINITE, p: str = "P", q: str = "Q") -> Formula:
    """Sentence over {beta, p, q} defining (finite) Cartesian frames."""
    fresh = Fresh()
    P, Q = member(p), member(q)
    if kind == FINITE:
        a, w = fresh(), fresh()
        shared_zero = ExistsFO(a, conj(
            P(a), Q(a),
            ForallFO(w, Implies(And(P(w), Q(w)), Equals(w, a))),
            zero_point(a, P, fresh), zero_point(a, Q, fresh),
        ))
        return conj(
            sequence(P, fresh), sequence(Q, fresh),
            shared_zero,
            _non_singleton(P, fresh), _non_singleton(Q, fresh),
            _lines_differ(P, Q, fresh),
        )
    if kind != INFINITE:
        raise ValueError(f"kind must be {FINITE!r} or {INFINITE!r}")
    pe, qe = fresh(), fresh()
    Pr, Qr = _without(P, pe), _without(Q, qe)
    z = fresh()
    common_zero = ExistsFO(z, conj(P(z), Q(z), zero_point(z, Pr, fresh), zero_point(z, Qr, fresh)))
    pp, qq = fresh(), fresh()
    meshing = forall([pp, qq], Implies(And(Pr(pp), Qr(qq)), _lines_intersect(pp, qe, qq, pe, fresh)))
    body = conj(
        omega_with_endpoint(pe, P, fresh),
        omega_with_endpoint(qe, Q, fresh),
        common_zero,
        _lines_differ(P, Q, fresh),
        meshing,
    )
    return exists([pe, qe], body)
