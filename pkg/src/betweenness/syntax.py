"""Formula syntax for FO, MSO and weak MSO over relational vocabularies.

First-order variables start with a lowercase letter, set symbols and set
variables with an uppercase letter. Set quantifiers carry a ``weak`` flag;
weak and strong quantifiers share one syntax tree.

Text grammar (ASCII)::

    formula  := disj [ "->" formula ]            right associative
    disj     := conj { "|" conj }
    conj     := unary { "&" unary }
    unary    := "!" unary | quant | atom | "(" formula ")"
    quant    := ("E" | "A" | "E2" | "A2" | "Ew" | "Aw") VAR "." formula
    atom     := NAME "(" VAR { "," VAR } ")" | VAR "=" VAR

A quantifier body extends as far to the right as possible.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Callable, Dict, FrozenSet, Iterable, Iterator, Mapping, Optional, Tuple


class FormulaError(ValueError):
    pass


class ParseError(FormulaError):
    def __init__(self, message: str, pos: int, text: str = ""):
        self.pos = pos
        self.text = text
        super().__init__(f"{message} at position {pos}")


class ArityError(FormulaError):
    pass


class UnknownSymbolError(FormulaError):
    pass


def is_fo_variable(name: str) -> bool:
    return bool(name) and name[0].islower()


def is_set_name(name: str) -> bool:
    return bool(name) and name[0].isupper()


@dataclass(frozen=True)
class Vocabulary:
    relations: Mapping[str, int] = field(default_factory=dict)
    setsymbols: FrozenSet[str] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "relations", dict(self.relations))
        object.__setattr__(self, "setsymbols", frozenset(self.setsymbols))
        clash = set(self.relations) & self.setsymbols
        if clash:
            raise FormulaError(f"names used both as relation and set symbol: {sorted(clash)}")
        for name, arity in self.relations.items():
            if arity < 1:
                raise FormulaError(f"relation {name} must have arity >= 1")
        for name in self.setsymbols:
            if not is_set_name(name):
                raise FormulaError(f"set symbol {name!r} must start uppercase")

    def __hash__(self):
        return hash((tuple(sorted(self.relations.items())), self.setsymbols))

    def extend(self, relations: Mapping[str, int] = (), setsymbols: Iterable[str] = ()) -> "Vocabulary":
        rels = dict(self.relations)
        rels.update(dict(relations))
        return Vocabulary(rels, self.setsymbols | frozenset(setsymbols))

    def __or__(self, other: "Vocabulary") -> "Vocabulary":
        return self.extend(other.relations, other.setsymbols)


# ---------------------------------------------------------------------------
# AST


class Formula:
    __slots__ = ()

    def __and__(self, other: "Formula") -> "Formula":
        return And(self, other)

    def __or__(self, other: "Formula") -> "Formula":
        return Or(self, other)

    def __invert__(self) -> "Formula":
        return Not(self)

    def __str__(self) -> str:
        return print_formula(self)


@dataclass(frozen=True, repr=True)
class RelAtom(Formula):
    rel: str
    args: Tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))


@dataclass(frozen=True)
class SetAtom(Formula):
    name: str
    var: str


@dataclass(frozen=True)
class Equals(Formula):
    left: str
    right: str


@dataclass(frozen=True)
class Not(Formula):
    body: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class ExistsFO(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class ForallFO(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class ExistsSet(Formula):
    var: str
    body: Formula
    weak: bool = False


@dataclass(frozen=True)
class ForallSet(Formula):
    var: str
    body: Formula
    weak: bool = False


ATOMS = (RelAtom, SetAtom, Equals)
BINARY = (And, Or, Implies)
FO_QUANTIFIERS = (ExistsFO, ForallFO)
SET_QUANTIFIERS = (ExistsSet, ForallSet)
QUANTIFIERS = FO_QUANTIFIERS + SET_QUANTIFIERS


# Small builders -------------------------------------------------------------

def conj(*fs: Formula) -> Formula:
    """Left-nested conjunction; needs at least one operand."""
    fs = [f for f in fs if f is not None]
    if not fs:
        raise FormulaError("empty conjunction")
    out = fs[0]
    for f in fs[1:]:
        out = And(out, f)
    return out


def disj(*fs: Formula) -> Formula:
    fs = [f for f in fs if f is not None]
    if not fs:
        raise FormulaError("empty disjunction")
    out = fs[0]
    for f in fs[1:]:
        out = Or(out, f)
    return out


def neq(x: str, y: str) -> Formula:
    return Not(Equals(x, y))


def exists(vars_: Iterable[str], body: Formula) -> Formula:
    for v in reversed(list(vars_)):
        body = ExistsFO(v, body)
    return body


def forall(vars_: Iterable[str], body: Formula) -> Formula:
    for v in reversed(list(vars_)):
        body = ForallFO(v, body)
    return body


def falsum(var: str) -> Formula:
    """A contradiction mentioning ``var``; the grammar has no constants."""
    return Not(Equals(var, var))


# Traversal ------------------------------------------------------------------

def children(f: Formula) -> Tuple[Formula, ...]:
    if isinstance(f, ATOMS):
        return ()
    if isinstance(f, Not):
        return (f.body,)
    if isinstance(f, BINARY):
        return (f.left, f.right)
    return (f.body,)


def subformulas(f: Formula) -> Iterator[Formula]:
    stack = [f]
    while stack:
        g = stack.pop()
        yield g
        stack.extend(reversed(children(g)))


def depth(f: Formula) -> int:
    return 1 + max((depth(c) for c in children(f)), default=0)


def quantifier_depth(f: Formula) -> int:
    inner = max((quantifier_depth(c) for c in children(f)), default=0)
    return inner + (1 if isinstance(f, QUANTIFIERS) else 0)


def free_variables(f: Formula, voc: Optional[Vocabulary] = None) -> Tuple[FrozenSet[str], FrozenSet[str]]:
    """Free first-order variables and free set names of ``f``.

    Set names that are symbols of ``voc`` (when given) are not variables and
    are left out.
    """
    fo, sets = _free(f)
    if voc is not None:
        sets = sets - voc.setsymbols
    return fo, sets


def _free(f: Formula) -> Tuple[FrozenSet[str], FrozenSet[str]]:
    if isinstance(f, RelAtom):
        return frozenset(f.args), frozenset()
    if isinstance(f, SetAtom):
        return frozenset([f.var]), frozenset([f.name])
    if isinstance(f, Equals):
        return frozenset([f.left, f.right]), frozenset()
    if isinstance(f, Not):
        return _free(f.body)
    if isinstance(f, BINARY):
        a, b = _free(f.left), _free(f.right)
        return a[0] | b[0], a[1] | b[1]
    fo, sets = _free(f.body)
    if isinstance(f, FO_QUANTIFIERS):
        return fo - {f.var}, sets
    return fo, sets - {f.var}


def all_names(f: Formula) -> set:
    """Every variable or symbol name occurring anywhere in ``f``."""
    names = set()
    for g in subformulas(f):
        if isinstance(g, RelAtom):
            names.add(g.rel)
            names.update(g.args)
        elif isinstance(g, SetAtom):
            names.update((g.name, g.var))
        elif isinstance(g, Equals):
            names.update((g.left, g.right))
        elif isinstance(g, QUANTIFIERS):
            names.add(g.var)
    return names


def symbols(f: Formula) -> Tuple[Dict[str, int], FrozenSet[str]]:
    """Relation symbols with arities and free set names used by ``f``."""
    rels: Dict[str, int] = {}
    for g in subformulas(f):
        if isinstance(g, RelAtom):
            if rels.setdefault(g.rel, len(g.args)) != len(g.args):
                raise ArityError(f"relation {g.rel} used with two arities")
    return rels, _free(f)[1]


def is_closed(f: Formula, voc: Optional[Vocabulary] = None) -> bool:
    fo, sets = free_variables(f, voc)
    return not fo and (voc is None or not sets)


# Fresh variables and substitution --------------------------------------------

class Fresh:
    """Generator of fresh first-order variable names ``v0, v1, ...``.

    Names already present in ``avoid`` are skipped. User-facing variables
    should not look like ``v<digits>``.
    """

    def __init__(self, avoid: Iterable[str] = (), stem: str = "v"):
        self.avoid = set(avoid)
        self.stem = stem
        self._counter = itertools.count()

    def __call__(self) -> str:
        while True:
            name = f"{self.stem}{next(self._counter)}"
            if name not in self.avoid:
                self.avoid.add(name)
                return name

    def many(self, k: int) -> list:
        return [self() for _ in range(k)]


def substitute(f: Formula, mapping: Mapping[str, str], fresh: Optional[Fresh] = None) -> Formula:
    """Capture-avoiding renaming of free first-order variables.

    Bound variables that would capture a substituted name are renamed to
    fresh ones.
    """
    mapping = {k: v for k, v in mapping.items() if k != v}
    if not mapping:
        return f
    if fresh is None:
        fresh = Fresh(all_names(f) | set(mapping) | set(mapping.values()))
    return _subst(f, mapping, fresh)


def _subst(f: Formula, m: Mapping[str, str], fresh: Fresh) -> Formula:
    if isinstance(f, RelAtom):
        return RelAtom(f.rel, tuple(m.get(a, a) for a in f.args))
    if isinstance(f, SetAtom):
        return SetAtom(f.name, m.get(f.var, f.var))
    if isinstance(f, Equals):
        return Equals(m.get(f.left, f.left), m.get(f.right, f.right))
    if isinstance(f, Not):
        return Not(_subst(f.body, m, fresh))
    if isinstance(f, BINARY):
        return type(f)(_subst(f.left, m, fresh), _subst(f.right, m, fresh))
    if isinstance(f, SET_QUANTIFIERS):
        return type(f)(f.var, _subst(f.body, m, fresh), f.weak)
    # first-order quantifier
    inner = {k: v for k, v in m.items() if k != f.var}
    if not inner:
        return f
    body_free = _free(f.body)[0]
    inner = {k: v for k, v in inner.items() if k in body_free}
    if not inner:
        return f
    var = f.var
    if var in inner.values():
        new = fresh()
        inner = dict(inner)
        inner[var] = new
        var = new
    return type(f)(var, _subst(f.body, inner, fresh))


def substitute_set(f: Formula, name: str, repl: Callable[[str], Formula],
                   fresh: Optional[Fresh] = None) -> Formula:
    """Replace every free occurrence of ``name(v)`` by ``repl(v)``.

    ``repl`` returns a formula whose only free variable of interest is its
    argument; other free variables of the replacement are protected from
    capture by renaming the binders they would fall under.
    """
    if fresh is None:
        fresh = Fresh(all_names(f))
    protected = _free(repl("__probe__"))[0] - {"__probe__"}
    return _subst_set(f, name, repl, protected, fresh)


def _subst_set(f, name, repl, protected, fresh):
    if isinstance(f, SetAtom):
        return repl(f.var) if f.name == name else f
    if isinstance(f, (RelAtom, Equals)):
        return f
    if isinstance(f, Not):
        return Not(_subst_set(f.body, name, repl, protected, fresh))
    if isinstance(f, BINARY):
        return type(f)(_subst_set(f.left, name, repl, protected, fresh),
                       _subst_set(f.right, name, repl, protected, fresh))
    if isinstance(f, SET_QUANTIFIERS):
        if f.var == name:
            return f
        return type(f)(f.var, _subst_set(f.body, name, repl, protected, fresh), f.weak)
    if f.var in protected:
        new = fresh()
        body = _subst(f.body, {f.var: new}, fresh)
        return type(f)(new, _subst_set(body, name, repl, protected, fresh))
    return type(f)(f.var, _subst_set(f.body, name, repl, protected, fresh))


def rename_set(f: Formula, old: str, new: str) -> Formula:
    return substitute_set(f, old, lambda v: SetAtom(new, v))


def map_weak(f: Formula, weak: Optional[bool]) -> Formula:
    """Set every set quantifier's weak flag to ``weak``."""
    if isinstance(f, ATOMS):
        return f
    if isinstance(f, Not):
        return Not(map_weak(f.body, weak))
    if isinstance(f, BINARY):
        return type(f)(map_weak(f.left, weak), map_weak(f.right, weak))
    if isinstance(f, SET_QUANTIFIERS):
        return type(f)(f.var, map_weak(f.body, weak), weak)
    return type(f)(f.var, map_weak(f.body, weak))


# ---------------------------------------------------------------------------
# Printer

_PREC = {Implies: 1, Or: 2, And: 3, Not: 4}
_OPS = {Implies: "->", Or: "|", And: "&"}
_QUANT_KW = {ExistsFO: "E", ForallFO: "A"}


def _prec(f: Formula) -> int:
    if isinstance(f, QUANTIFIERS):
        return 0
    return _PREC.get(type(f), 5)


def _quant_keyword(f: Formula) -> str:
    if isinstance(f, FO_QUANTIFIERS):
        return _QUANT_KW[type(f)]
    head = "E" if isinstance(f, ExistsSet) else "A"
    return head + ("w" if f.weak else "2")


def print_formula(f: Formula) -> str:
    """Canonical text form; ``parse_formula`` inverts it."""
    out = []
    _print(f, out)
    return "".join(out)


def _print(f: Formula, out: list) -> None:
    # explicit stack would be nicer for huge inputs; depth stays in the hundreds here
    if isinstance(f, RelAtom):
        out.append(f"{f.rel}({','.join(f.args)})")
    elif isinstance(f, SetAtom):
        out.append(f"{f.name}({f.var})")
    elif isinstance(f, Equals):
        out.append(f"{f.left} = {f.right}")
    elif isinstance(f, Not):
        out.append("!")
        if isinstance(f.body, (RelAtom, SetAtom, Not)):
            _print(f.body, out)
        else:
            out.append("(")
            _print(f.body, out)
            out.append(")")
    elif isinstance(f, BINARY):
        p = _PREC[type(f)]
        right_assoc = isinstance(f, Implies)
        lp, rp = _prec(f.left), _prec(f.right)
        _wrap(f.left, lp < p or (lp == p and right_assoc), out)
        out.append(f" {_OPS[type(f)]} ")
        _wrap(f.right, rp < p or (rp == p and not right_assoc), out)
    else:
        out.append(f"{_quant_keyword(f)} {f.var}. ")
        _print(f.body, out)


def _wrap(f: Formula, paren: bool, out: list) -> None:
    if paren:
        out.append("(")
        _print(f, out)
        out.append(")")
    else:
        _print(f, out)


# ---------------------------------------------------------------------------
# Parser

_TOKEN_RE = re.compile(r"\s*(?:(->)|([!&|().,=])|([A-Za-z_][A-Za-z0-9_]*))")
_QUANT_TOKENS = {"E", "A", "E2", "A2", "Ew", "Aw"}


def _tokenize(text: str) -> list:
    tokens = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", pos, text)
        start = m.start(m.lastindex)
        tokens.append((m.group(m.lastindex), start))
        pos = m.end()
    tokens.append(("<eof>", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, voc: Vocabulary):
        self.text = text
        self.voc = voc
        self.tokens = _tokenize(text)
        self.i = 0
        self.bound_sets: list = []

    def peek(self, k: int = 0) -> str:
        return self.tokens[min(self.i + k, len(self.tokens) - 1)][0]

    def pos(self) -> int:
        return self.tokens[self.i][1]

    def take(self) -> str:
        tok = self.tokens[self.i][0]
        self.i += 1
        return tok

    def expect(self, tok: str, what: str = "") -> None:
        if self.peek() != tok:
            raise ParseError(f"expected {what or repr(tok)}, found {self.peek()!r}", self.pos(), self.text)
        self.take()

    def ident(self, what: str) -> str:
        tok = self.peek()
        if not re.match(r"[A-Za-z_]", tok) or tok == "<eof>":
            raise ParseError(f"expected {what}, found {tok!r}", self.pos(), self.text)
        return self.take()

    def fo_var(self) -> str:
        pos = self.pos()
        name = self.ident("variable")
        if not is_fo_variable(name):
            raise ParseError(f"first-order variable must start lowercase: {name!r}", pos, self.text)
        return name

    def parse(self) -> Formula:
        f = self.formula()
        if self.peek() != "<eof>":
            raise ParseError(f"unexpected token {self.peek()!r}", self.pos(), self.text)
        return f

    def formula(self) -> Formula:
        left = self.disjunction()
        if self.peek() == "->":
            self.take()
            return Implies(left, self.formula())
        return left

    def disjunction(self) -> Formula:
        f = self.conjunction()
        while self.peek() == "|":
            self.take()
            f = Or(f, self.conjunction())
        return f

    def conjunction(self) -> Formula:
        f = self.unary()
        while self.peek() == "&":
            self.take()
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        tok = self.peek()
        if tok == "!":
            self.take()
            return Not(self.unary())
        if tok == "(":
            self.take()
            f = self.formula()
            self.expect(")")
            return f
        if tok in _QUANT_TOKENS and self.peek(1) not in ("(", "="):
            return self.quantifier()
        return self.atom()

    def quantifier(self) -> Formula:
        kw = self.take()
        pos = self.pos()
        var = self.ident("quantified variable")
        if len(kw) == 1:
            if not is_fo_variable(var):
                raise ParseError(f"first-order variable must start lowercase: {var!r}", pos, self.text)
        elif not is_set_name(var):
            raise ParseError(f"set variable must start uppercase: {var!r}", pos, self.text)
        self.expect(".", "'.' after quantified variable")
        if len(kw) == 1:
            body = self.formula()
            return (ExistsFO if kw == "E" else ForallFO)(var, body)
        self.bound_sets.append(var)
        try:
            body = self.formula()
        finally:
            self.bound_sets.pop()
        cls = ExistsSet if kw[0] == "E" else ForallSet
        return cls(var, body, kw[1] == "w")

    def atom(self) -> Formula:
        pos = self.pos()
        name = self.ident("atom")
        if self.peek() == "=":
            self.take()
            right = self.fo_var()
            if not is_fo_variable(name):
                raise ParseError(f"equality needs first-order variables, got {name!r}", pos, self.text)
            return Equals(name, right)
        if self.peek() != "(":
            raise ParseError(f"expected '(' or '=' after {name!r}", self.pos(), self.text)
        self.take()
        args = [self.fo_var()]
        while self.peek() == ",":
            self.take()
            args.append(self.fo_var())
        self.expect(")")
        if name in self.voc.relations:
            arity = self.voc.relations[name]
            if arity != len(args):
                raise ArityError(f"relation {name} has arity {arity}, got {len(args)} arguments (position {pos})")
            return RelAtom(name, tuple(args))
        if is_set_name(name):
            if len(args) == 1:
                return SetAtom(name, args[0])
            if name in self.voc.setsymbols or name in self.bound_sets:
                raise ArityError(f"set symbol {name} takes one argument (position {pos})")
        raise UnknownSymbolError(f"unknown relation symbol {name!r} at position {pos}")


def parse_formula(text: str, voc: Optional[Vocabulary] = None) -> Formula:
    """Parse ``text`` against ``voc``.

    Uppercase unary atoms that are neither vocabulary relations nor set
    symbols are read as free set variables.
    """
    return _Parser(text, voc or Vocabulary()).parse()


def check_vocabulary(f: Formula, voc: Vocabulary) -> None:
    """Raise unless every relation atom of ``f`` matches ``voc``."""
    for g in subformulas(f):
        if isinstance(g, RelAtom):
            if g.rel not in voc.relations:
                raise UnknownSymbolError(f"unknown relation symbol {g.rel!r}")
            if voc.relations[g.rel] != len(g.args):
                raise ArityError(f"relation {g.rel} has arity {voc.relations[g.rel]}, got {len(g.args)}")
