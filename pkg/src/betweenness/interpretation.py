"""One-dimensional uniform first-order interpretations.

An :class:`Interpretation` defines a sigma-structure inside a
tau-structure by a domain formula and one formula per sigma-relation.
:func:`translate` is the P-expansion map on formulas and
:func:`induced_structure` builds the interpreted structure, reusing the
element names of the host.
"""

from __future__ import annotations

import itertools
import re
import warnings
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Tuple

from .evaluator import DEFAULT_BUDGET, EvalBudget, Model
from .formulas import FINITE, make_frame_formulas
from .structures import BETA, FinStructure
from .syntax import (
    And,
    ArityError,
    Equals,
    ExistsFO,
    ExistsSet,
    ForallFO,
    ForallSet,
    Formula,
    FormulaError,
    Fresh,
    Implies,
    Not,
    Or,
    RelAtom,
    SetAtom,
    Vocabulary,
    all_names,
    free_variables,
    parse_formula,
    print_formula,
    substitute,
    subformulas,
)


class SymbolClash(FormulaError):
    pass


class EmptyDomainWarning(UserWarning):
    pass


@dataclass(frozen=True)
class Interpretation:
    source_voc: Vocabulary
    target_voc: Vocabulary
    dom_var: str
    dom_formula: Formula
    rel_formulas: Mapping[str, Tuple[Tuple[str, ...], Formula]] = field(default_factory=dict)

    def __post_init__(self):
        fo, _ = free_variables(self.dom_formula, self.target_voc)
        if not fo <= {self.dom_var}:
            raise FormulaError(f"domain formula has extra free variables {sorted(fo - {self.dom_var})}")
        _check_over(self.dom_formula, self.target_voc)
        rels = {}
        for name, (params, f) in self.rel_formulas.items():
            params = tuple(params)
            if name not in self.source_voc.relations:
                raise FormulaError(f"{name} is not a source relation")
            if len(params) != self.source_voc.relations[name]:
                raise ArityError(f"{name} has arity {self.source_voc.relations[name]}, got {len(params)} parameters")
            if len(set(params)) != len(params):
                raise FormulaError(f"repeated parameter for {name}")
            fo, _ = free_variables(f, self.target_voc)
            if not fo <= set(params):
                raise FormulaError(f"formula for {name} has extra free variables {sorted(fo - set(params))}")
            _check_over(f, self.target_voc)
            rels[name] = (params, f)
        missing = set(self.source_voc.relations) - set(rels)
        if missing:
            raise FormulaError(f"no formula for source relations {sorted(missing)}")
        object.__setattr__(self, "rel_formulas", rels)

    def names(self) -> set:
        out = set(all_names(self.dom_formula)) | {self.dom_var}
        for params, f in self.rel_formulas.values():
            out |= all_names(f) | set(params)
        return out


def _check_over(f: Formula, voc: Vocabulary) -> None:
    for g in subformulas(f):
        if isinstance(g, RelAtom):
            if voc.relations.get(g.rel) != len(g.args):
                raise FormulaError(f"{g.rel}/{len(g.args)} is not a target relation")


def translate(interp: Interpretation, f: Formula) -> Formula:
    """The P-expansion translation of ``f`` (sigma plus unary P) into tau plus P."""
    _, pset = free_variables(f)
    clash = pset & (set(interp.source_voc.relations) | set(interp.target_voc.relations)
                    | interp.target_voc.setsymbols | interp.source_voc.setsymbols)
    if clash:
        raise SymbolClash(f"unary symbols clash with the vocabularies: {sorted(clash)}")
    for g in subformulas(f):
        if isinstance(g, RelAtom):
            arity = interp.source_voc.relations.get(g.rel)
            if arity is None:
                raise FormulaError(f"{g.rel} is not a source relation")
            if arity != len(g.args):
                raise ArityError(f"{g.rel} has arity {arity}, got {len(g.args)}")
    fresh = Fresh(all_names(f) | interp.names())
    return _tr(interp, f, fresh)


def _dom(interp: Interpretation, x: str, fresh: Fresh) -> Formula:
    return substitute(interp.dom_formula, {interp.dom_var: x}, fresh)


def _tr(interp: Interpretation, f: Formula, fresh: Fresh) -> Formula:
    if isinstance(f, (SetAtom, Equals)):
        return f
    if isinstance(f, RelAtom):
        params, phi = interp.rel_formulas[f.rel]
        return substitute(phi, dict(zip(params, f.args)), fresh)
    if isinstance(f, Not):
        return Not(_tr(interp, f.body, fresh))
    if isinstance(f, (And, Or, Implies)):
        # Or / Implies: same result as desugaring to Not/And and resugaring
        return type(f)(_tr(interp, f.left, fresh), _tr(interp, f.right, fresh))
    if isinstance(f, ExistsFO):
        return ExistsFO(f.var, And(_dom(interp, f.var, fresh), _tr(interp, f.body, fresh)))
    if isinstance(f, ForallFO):
        return ForallFO(f.var, Implies(_dom(interp, f.var, fresh), _tr(interp, f.body, fresh)))
    if isinstance(f, (ExistsSet, ForallSet)):
        return type(f)(f.var, _tr(interp, f.body, fresh), f.weak)
    raise TypeError(f"not a formula: {f!r}")


def induced_structure(interp: Interpretation, B: FinStructure, budget: EvalBudget = DEFAULT_BUDGET) -> FinStructure:
    """The interpreted structure F(B), on B's element names.

    Unary predicates of B are restricted to the new domain and kept.
    """
    model = Model(B, budget)
    dom = model.compile(interp.dom_formula)
    domain = [e for e in B.elements if dom({interp.dom_var: e})]
    if not domain:
        warnings.warn("interpretation has an empty domain", EmptyDomainWarning, stacklevel=2)
    relations = {}
    for name, (params, phi) in interp.rel_formulas.items():
        check = model.compile(phi)
        relations[name] = {
            t for t in itertools.product(domain, repeat=len(params))
            if check(dict(zip(params, t)))
        }
    keep = set(domain)
    unary = {name: s & keep for name, s in B.unary.items()}
    return FinStructure(tuple(domain), relations, unary, arities=dict(interp.source_voc.relations))


# ---------------------------------------------------------------------------

GRID_VOC = Vocabulary({"H": 2, "V": 2})


def frame_interpretation(kind: str = FINITE) -> Interpretation:
    """Tori (finite kind) or grids (infinite kind) inside Cartesian frames."""
    ff = make_frame_formulas(kind)
    target = Vocabulary({BETA: 3}, {"P", "Q"})
    return Interpretation(GRID_VOC, target, "u", ff.dom, {"H": (("u", "v"), ff.h), "V": (("u", "v"), ff.v)})


# File format ------------------------------------------------------------------

_REL_HEAD = re.compile(r"^rel\s+([A-Za-z_][A-Za-z0-9_]*)\s*(?:\(([^)]*)\))?\s*:(.*)$")
_DOM_HEAD = re.compile(r"^dom\s*(?:\(\s*([a-z][A-Za-z0-9_]*)\s*\))?\s*:(.*)$")


def _parse_voc(items: Iterable[str]) -> Vocabulary:
    rels, sets = {}, set()
    for item in items:
        if "/" in item:
            name, arity = item.split("/")
            rels[name] = int(arity)
        else:
            sets.add(item)
    return Vocabulary(rels, sets)


def parse_interpretation(text: str) -> Interpretation:
    """Read the interpretation file format.

    ``source H/2 V/2`` and ``target beta/3 P Q`` header lines, then
    ``dom(u): <formula>`` and ``rel H(u,v): <formula>`` lines. Without an
    explicit parameter list the free variables are taken in sorted order.
    """
    source = target = None
    dom = None
    rels = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("source"):
            source = _parse_voc(line.split()[1:])
            continue
        if line.startswith("target"):
            target = _parse_voc(line.split()[1:])
            continue
        m = _DOM_HEAD.match(line)
        if m:
            dom = (m.group(1), m.group(2))
            continue
        m = _REL_HEAD.match(line)
        if m:
            params = tuple(p.strip() for p in m.group(2).split(",")) if m.group(2) else None
            rels[m.group(1)] = (params, m.group(3))
            continue
        raise FormulaError(f"line {lineno}: cannot parse {raw!r}")
    if source is None or dom is None:
        raise FormulaError("interpretation needs a 'source' line and a 'dom' line")
    target = target or Vocabulary({BETA: 3})
    dom_var, dom_text = dom
    dom_formula = parse_formula(dom_text, target)
    if dom_var is None:
        fo, _ = free_variables(dom_formula)
        if len(fo) != 1:
            raise FormulaError("domain formula needs exactly one free variable or an explicit '(var)'")
        dom_var = next(iter(fo))
    rel_formulas = {}
    for name, (params, body) in rels.items():
        f = parse_formula(body, target)
        if params is None:
            params = tuple(sorted(free_variables(f)[0]))
        rel_formulas[name] = (params, f)
    return Interpretation(source, target, dom_var, dom_formula, rel_formulas)


def format_interpretation(interp: Interpretation) -> str:
    def voc_items(voc):
        return [f"{k}/{v}" for k, v in sorted(voc.relations.items())] + sorted(voc.setsymbols)

    lines = [
        "source " + " ".join(voc_items(interp.source_voc)),
        "target " + " ".join(voc_items(interp.target_voc)),
        f"dom({interp.dom_var}): {print_formula(interp.dom_formula)}",
    ]
    for name, (params, f) in interp.rel_formulas.items():
        lines.append(f"rel {name}({','.join(params)}): {print_formula(f)}")
    return "\n".join(lines) + "\n"
