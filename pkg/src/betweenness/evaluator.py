"""Brute-force model checking of FO / MSO / weak MSO on finite structures.

Formulas are compiled into nested closures over a structure. Elements are
handled as integer indices and sets as bitmasks over the element order.
Quantifier nodes memoise their value per assignment of their free
variables, so subformulas that do not mention the changing predicates are
computed once per compiled formula.

On finite structures weak set quantifiers range over the same sets as
strong ones, so both compile to the same code.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from operator import itemgetter
from typing import Callable, Dict, FrozenSet, Iterable, Mapping, Optional, Sequence

from .structures import FinStructure
from .syntax import (
    And,
    Equals,
    ExistsFO,
    ExistsSet,
    ForallFO,
    ForallSet,
    Formula,
    Implies,
    Not,
    Or,
    RelAtom,
    SetAtom,
    free_variables,
    is_set_name,
)

if sys.getrecursionlimit() < 20000:
    sys.setrecursionlimit(20000)


class EvalError(Exception):
    pass


class BudgetExceeded(EvalError):
    pass


class UnboundVariable(EvalError):
    pass


class VocabularyMismatch(EvalError):
    pass


@dataclass(frozen=True)
class EvalBudget:
    max_set_domain: int = 16
    max_fo_domain: int = 10000

    def __post_init__(self):
        if self.max_set_domain < 1 or self.max_fo_domain < 1:
            raise ValueError("budget limits must be positive")


@dataclass
class Assignment:
    fo: Dict[str, str] = field(default_factory=dict)
    sets: Dict[str, FrozenSet[str]] = field(default_factory=dict)


DEFAULT_BUDGET = EvalBudget()

_Fn = Callable[[dict], bool]


class CompiledFormula:
    """A formula compiled against one structure.

    Call with a mapping from free variable names to element names (first
    order) or iterables of element names (set variables).
    """

    def __init__(self, model: "Model", fn: _Fn, fo_free: FrozenSet[str], set_free: FrozenSet[str]):
        self.model = model
        self.fn = fn
        self.fo_free = fo_free
        self.set_free = set_free

    def __call__(self, assignment: Optional[Mapping] = None) -> bool:
        return self.fn(self.model.env(assignment or {}, self.fo_free, self.set_free))

    def raw(self, env: dict) -> bool:
        """Evaluate on an environment of element indices and bitmasks."""
        return self.fn(env)


class Model:
    """A structure prepared for evaluation."""

    def __init__(self, structure: FinStructure, budget: EvalBudget = DEFAULT_BUDGET):
        if len(structure) > budget.max_fo_domain:
            raise BudgetExceeded(f"domain of size {len(structure)} exceeds max_fo_domain={budget.max_fo_domain}")
        self.structure = structure
        self.budget = budget
        self.n = len(structure)
        self.index = {e: i for i, e in enumerate(structure.elements)}
        self.rels = {
            name: frozenset(tuple(self.index[e] for e in t) for t in ts)
            for name, ts in structure.relations.items()
        }
        self.masks = {name: self.to_mask(s) for name, s in structure.unary.items()}

    def to_mask(self, members: Iterable[str]) -> int:
        mask = 0
        for e in members:
            try:
                mask |= 1 << self.index[e]
            except KeyError:
                raise UnboundVariable(f"{e!r} is not an element of the structure") from None
        return mask

    def from_mask(self, mask: int) -> FrozenSet[str]:
        return frozenset(e for e, i in self.index.items() if mask >> i & 1)

    def env(self, assignment: Mapping, fo_free: Iterable[str], set_free: Iterable[str]) -> dict:
        env = {}
        for name, value in assignment.items():
            if is_set_name(name):
                env[name] = value if isinstance(value, int) else self.to_mask(value)
            else:
                if value not in self.index:
                    raise UnboundVariable(f"{value!r} is not an element of the structure")
                env[name] = self.index[value]
        missing = [v for v in list(fo_free) + list(set_free) if v not in env]
        if missing:
            raise UnboundVariable(f"unbound variables: {sorted(missing)}")
        return env

    def compile(self, f: Formula, free_sets: Iterable[str] = ()) -> CompiledFormula:
        """Compile ``f``; ``free_sets`` are set names supplied at call time.

        Set names not listed and not bound inside ``f`` must be predicates
        of the structure.
        """
        free_sets = frozenset(free_sets)
        fn, _ = _Compiler(self, free_sets).compile(f, frozenset())
        fo, sets = free_variables(f)
        return CompiledFormula(self, fn, fo, sets & free_sets)


class _Compiler:
    def __init__(self, model: Model, external_sets: FrozenSet[str]):
        self.model = model
        self.external = external_sets

    def compile(self, f: Formula, bound_sets: FrozenSet[str]):
        """Return ``(fn, env_names)`` where env_names are the free names
        whose values come from the environment."""
        m = self.model
        if isinstance(f, RelAtom):
            if f.rel not in m.rels:
                raise VocabularyMismatch(f"structure has no relation {f.rel!r}")
            arity = m.structure.arities[f.rel]
            if arity != len(f.args):
                raise VocabularyMismatch(f"relation {f.rel} has arity {arity}, formula uses {len(f.args)}")
            rel = m.rels[f.rel]
            args = f.args
            if len(args) == 1:
                a, = args
                return (lambda env: (env[a],) in rel), frozenset(args)
            get = itemgetter(*args)
            return (lambda env: get(env) in rel), frozenset(args)
        if isinstance(f, SetAtom):
            var, name = f.var, f.name
            if name in bound_sets or name in self.external:
                return (lambda env: env[name] >> env[var] & 1 == 1), frozenset([name, var])
            if name in m.masks:
                mask = m.masks[name]
                return (lambda env: mask >> env[var] & 1 == 1), frozenset([var])
            raise UnboundVariable(f"set name {name!r} is neither bound nor a predicate of the structure")
        if isinstance(f, Equals):
            a, b = f.left, f.right
            return (lambda env: env[a] == env[b]), frozenset([a, b])
        if isinstance(f, Not):
            g, names = self.compile(f.body, bound_sets)
            return (lambda env: not g(env)), names
        if isinstance(f, (And, Or, Implies)):
            g, gn = self.compile(f.left, bound_sets)
            h, hn = self.compile(f.right, bound_sets)
            if isinstance(f, And):
                fn = lambda env: g(env) and h(env)
            elif isinstance(f, Or):
                fn = lambda env: g(env) or h(env)
            else:
                fn = lambda env: (not g(env)) or h(env)
            return fn, gn | hn
        if isinstance(f, (ExistsFO, ForallFO)):
            body, names = self.compile(f.body, bound_sets)
            names = names - {f.var}
            domain = range(m.n)
            return self._memo(_fo_quantifier(f.var, body, domain, isinstance(f, ExistsFO)), names), names
        if isinstance(f, (ExistsSet, ForallSet)):
            body, names = self.compile(f.body, bound_sets | {f.var})
            names = names - {f.var}
            fn = _set_quantifier(f.var, body, m.n, m.budget.max_set_domain, isinstance(f, ExistsSet))
            return self._memo(fn, names), names
        raise TypeError(f"not a formula: {f!r}")

    @staticmethod
    def _memo(fn: _Fn, names: FrozenSet[str]) -> _Fn:
        cache: dict = {}
        if not names:
            def memo(env):
                try:
                    return cache[()]
                except KeyError:
                    value = cache[()] = fn(env)
                    return value
            return memo
        key = itemgetter(*sorted(names))

        def memo(env):
            k = key(env)
            try:
                return cache[k]
            except KeyError:
                value = cache[k] = fn(env)
                return value
        return memo


_MISSING = object()


def _fo_quantifier(var: str, body: _Fn, domain: range, existential: bool) -> _Fn:
    def run(env):
        old = env.get(var, _MISSING)
        try:
            for e in domain:
                env[var] = e
                if body(env) == existential:
                    return existential
            return not existential
        finally:
            if old is _MISSING:
                env.pop(var, None)
            else:
                env[var] = old
    return run


def _set_quantifier(var: str, body: _Fn, n: int, limit: int, existential: bool) -> _Fn:
    def run(env):
        if n > limit:
            raise BudgetExceeded(f"set quantifier over a domain of size {n} exceeds max_set_domain={limit}")
        old = env.get(var, _MISSING)
        try:
            for mask in range(1 << n):
                env[var] = mask
                if body(env) == existential:
                    return existential
            return not existential
        finally:
            if old is _MISSING:
                env.pop(var, None)
            else:
                env[var] = old
    return run


def evaluate(structure: FinStructure, f: Formula, assignment: Optional[Assignment] = None,
             budget: EvalBudget = DEFAULT_BUDGET) -> bool:
    """Truth value of ``f`` in ``structure`` under ``assignment``."""
    assignment = assignment or Assignment()
    model = Model(structure, budget)
    compiled = model.compile(f, free_sets=assignment.sets)
    values = dict(assignment.fo)
    values.update(assignment.sets)
    return compiled(values)


def _lex_candidates(model: Model, positions: Sequence[int], k: int):
    """Yield tuples of k bitmasks in lexicographic order of the concatenated
    characteristic vectors (first predicate, first element most significant)."""
    width = len(positions)
    total = width * k
    shifts = [(p, i, total - 1 - (p * width + j)) for p in range(k) for j, i in enumerate(positions)]
    for code in range(1 << total):
        masks = [0] * k
        for p, i, bit in shifts:
            if code >> bit & 1:
                masks[p] |= 1 << i
        yield masks


def expansion_search(structure: FinStructure, sentence: Formula, prednames: Sequence[str],
                     budget: EvalBudget = DEFAULT_BUDGET, domain: Optional[Iterable[str]] = None,
                     compiled: Optional[CompiledFormula] = None) -> Optional[Dict[str, FrozenSet[str]]]:
    """Lexicographically least expansion by ``prednames`` satisfying ``sentence``.

    Candidates are all tuples of subsets of ``domain`` (default: every
    element). Returns ``None`` when no expansion works.
    """
    prednames = list(prednames)
    if len(set(prednames)) != len(prednames):
        raise ValueError("duplicate predicate names")
    clash = set(prednames) & (set(structure.unary) | set(structure.relations))
    if clash:
        raise ValueError(f"predicate names already used by the structure: {sorted(clash)}")
    fo_free, _ = free_variables(sentence)
    if fo_free:
        raise EvalError(f"sentence has free variables {sorted(fo_free)}")
    model = compiled.model if compiled is not None else Model(structure, budget)
    if compiled is None:
        compiled = model.compile(sentence, free_sets=prednames)
    if domain is None:
        positions = list(range(model.n))
    else:
        wanted = set(domain)
        positions = [model.index[e] for e in structure.elements if e in wanted]
    if len(positions) * len(prednames) > budget.max_set_domain:
        raise BudgetExceeded(
            f"{len(prednames)} predicates over {len(positions)} elements exceed max_set_domain={budget.max_set_domain}"
        )
    env: dict = {}
    for masks in _lex_candidates(model, positions, len(prednames)):
        env.update(zip(prednames, masks))
        if compiled.raw(env):
            return {p: model.from_mask(mk) for p, mk in zip(prednames, masks)}
    return None
