"""PDDL reader for the supported subset (typed STRIPS + negative
preconditions + total-cost action costs).

Keywords are case-insensitive; identifiers are case-preserving but
compared case-insensitively, and references are re-spelled with the
declaration's casing so round-trips are exact.
"""

from __future__ import annotations

import re

from .. import sexpr
from ..errors import ParseError, UnsupportedConstructError, ValidationError
from ..sexpr import Atom, Node, SList, expect_atom, expect_list
from .model import (
    OBJECT_TYPE,
    ActionSchema,
    GroundAtom,
    Literal,
    Parameter,
    PlanningDomain,
    PlanningProblem,
    Predicate,
    TypeDecl,
    TypedObject,
    is_variable,
    validate_ground_atom,
)

SUPPORTED_REQUIREMENTS = {
    ":strips",
    ":typing",
    ":negative-preconditions",
    ":action-costs",
}

UNSUPPORTED_HEADS = {
    "forall",
    "exists",
    "when",
    "or",
    "imply",
    "oneof",
    "preference",
    "either",
    "=",
    "<",
    ">",
    "<=",
    ">=",
    "assign",
    "decrease",
    "scale-up",
    "scale-down",
}

_IDENT_RE = re.compile(r"^[A-Za-z][A-Za-z0-9_-]*$")
_VAR_RE = re.compile(r"^\?[A-Za-z][A-Za-z0-9_-]*$")


def _check_ident(tok: Atom, what: str) -> str:
    if tok.is_string or not _IDENT_RE.match(tok.text):
        raise ParseError(f"invalid {what}: '{tok.text}'", tok.line, tok.column)
    return tok.text


def _check_var(tok: Atom, what: str = "variable") -> str:
    if tok.is_string or not _VAR_RE.match(tok.text):
        raise ParseError(f"invalid {what}: '{tok.text}'", tok.line, tok.column)
    return tok.text


def _head(form: SList) -> str:
    if len(form) == 0 or not isinstance(form[0], Atom):
        return ""
    return form[0].lower()


def parse_typed_list(nodes: tuple, variables: bool) -> list[tuple[Atom, str]]:
    """Parse `n1 n2 - type n3 ...`; untyped trailing names default to object."""
    out: list[tuple[Atom, str]] = []
    pending: list[Atom] = []
    i = 0
    while i < len(nodes):
        node = nodes[i]
        tok = expect_atom(node, "a name")
        if tok.text == "-" and not tok.is_string:
            if not pending:
                raise ParseError("dangling '-' in typed list", tok.line, tok.column)
            if i + 1 >= len(nodes):
                raise ParseError("missing type after '-'", tok.line, tok.column)
            type_tok = expect_atom(nodes[i + 1], "a type name")
            type_name = _check_ident(type_tok, "type name")
            out.extend((name, type_name) for name in pending)
            pending = []
            i += 2
        else:
            if variables:
                _check_var(tok)
            else:
                _check_ident(tok, "name")
            pending.append(tok)
            i += 1
    out.extend((name, OBJECT_TYPE) for name in pending)
    return out


class _SymbolTable:
    """Resolves case-insensitive references to declared casings."""

    def __init__(self, domain: PlanningDomain | None = None):
        self.predicates: dict[str, Predicate] = {}
        self.types: dict[str, str] = {OBJECT_TYPE: OBJECT_TYPE}
        if domain is not None:
            self.predicates = dict(domain.predicate_table())
            for t in domain.types:
                self.types[t.name.lower()] = t.name

    def resolve_type(self, tok: Atom) -> str:
        name = self.types.get(tok.text.lower())
        if name is None:
            raise ParseError(f"undeclared type '{tok.text}'", tok.line, tok.column)
        return name

    def resolve_predicate(self, tok: Atom, args: list[str]) -> str:
        decl = self.predicates.get(tok.text.lower())
        if decl is None:
            raise ParseError(f"unknown predicate '{tok.text}'", tok.line, tok.column)
        if decl.arity != len(args):
            rendered = "(" + " ".join([tok.text] + args) + ")"
            raise ParseError(
                f"arity mismatch: {rendered} has {len(args)} arguments, "
                f"'{decl.name}' declares {decl.arity}",
                tok.line,
                tok.column,
            )
        return decl.name


def parse_atom(form: SList, symbols: _SymbolTable, params: dict[str, str] | None) -> GroundAtom:
    """Parse `(pred term*)`. Variable terms must be declared parameters
    when a parameter scope is given; constant terms pass through."""
    if len(form) == 0:
        raise ParseError("empty atom", form.line, form.column)
    head = expect_atom(form[0], "a predicate name")
    if head.lower() in UNSUPPORTED_HEADS:
        raise UnsupportedConstructError(head.text, head.line, head.column)
    args: list[str] = []
    for node in form.items[1:]:
        tok = expect_atom(node, "an argument")
        if tok.text.startswith("?"):
            name = _check_var(tok)
            if params is not None:
                declared = params.get(name.lower())
                if declared is None:
                    raise ParseError(
                        f"variable {name} not among parameters", tok.line, tok.column
                    )
                name = declared
            args.append(name)
        else:
            args.append(_check_ident(tok, "constant"))
    pred = symbols.resolve_predicate(head, args)
    return GroundAtom(pred, tuple(args))


def parse_literal(node: Node, symbols: _SymbolTable, params: dict[str, str] | None) -> Literal:
    form = expect_list(node, "a literal")
    if _head(form) == "not":
        if len(form) != 2:
            raise ParseError("(not ...) takes one atom", form.line, form.column)
        inner = expect_list(form[1], "an atom")
        if _head(inner) == "not":
            raise ParseError("nested negation", inner.line, inner.column)
        return Literal(parse_atom(inner, symbols, params), positive=False)
    return Literal(parse_atom(form, symbols, params), positive=True)


def parse_condition(node: Node, symbols: _SymbolTable, params: dict[str, str] | None) -> tuple[Literal, ...]:
    """Parse a conjunction: a literal or `(and literal*)`."""
    form = expect_list(node, "a condition")
    if _head(form) == "and":
        return tuple(parse_literal(item, symbols, params) for item in form.items[1:])
    if len(form) == 0:
        return ()
    return (parse_literal(form, symbols, params),)


def _parse_cost_effect(form: SList) -> int:
    # (increase (total-cost) <n>)
    if len(form) != 3:
        raise ParseError("(increase ...) takes two arguments", form.line, form.column)
    target = expect_list(form[1], "(total-cost)")
    if len(target) != 1 or expect_atom(target[0], "total-cost").lower() != "total-cost":
        raise UnsupportedConstructError("numeric fluent other than total-cost", form.line, form.column)
    amount = expect_atom(form[2], "a cost value")
    if not amount.text.isdigit():
        raise ParseError(
            f"cost must be a non-negative integer, got '{amount.text}'",
            amount.line,
            amount.column,
        )
    return int(amount.text)


def _parse_action(form: SList, symbols: _SymbolTable) -> tuple[ActionSchema, bool]:
    items = form.items
    name = _check_ident(expect_atom(items[1], "an action name"), "action name")
    sections: dict[str, Node] = {}
    i = 2
    while i < len(items):
        key = expect_atom(items[i], "an action section keyword")
        kw = key.lower()
        if kw not in (":parameters", ":precondition", ":effect"):
            raise UnsupportedConstructError(key.text, key.line, key.column)
        if i + 1 >= len(items):
            raise ParseError(f"missing body for {key.text}", key.line, key.column)
        if kw in sections:
            raise ParseError(f"duplicate {key.text} section", key.line, key.column)
        sections[kw] = items[i + 1]
        i += 2

    params: list[Parameter] = []
    scope: dict[str, str] = {}
    if ":parameters" in sections:
        plist = expect_list(sections[":parameters"], "a parameter list")
        for tok, type_tok_name in parse_typed_list(plist.items, variables=True):
            type_name = symbols.resolve_type(Atom(type_tok_name, tok.line, tok.column))
            if tok.text.lower() in scope:
                raise ParseError(f"duplicate parameter {tok.text}", tok.line, tok.column)
            scope[tok.text.lower()] = tok.text
            params.append(Parameter(tok.text, type_name))

    precondition: tuple[Literal, ...] = ()
    if ":precondition" in sections:
        precondition = parse_condition(sections[":precondition"], symbols, scope)

    adds: list[GroundAtom] = []
    dels: list[GroundAtom] = []
    cost: int | None = None
    has_cost_effect = False

    def handle_effect(node: Node) -> None:
        nonlocal cost, has_cost_effect
        form = expect_list(node, "an effect")
        head = _head(form)
        if head == "increase":
            if cost is not None:
                raise ParseError("duplicate cost effect", form.line, form.column)
            cost = _parse_cost_effect(form)
            has_cost_effect = True
        elif head == "not":
            lit = parse_literal(form, symbols, scope)
            dels.append(lit.atom)
        else:
            adds.append(parse_atom(form, symbols, scope))

    if ":effect" in sections:
        eff = expect_list(sections[":effect"], "an effect")
        if _head(eff) == "and":
            for item in eff.items[1:]:
                handle_effect(item)
        elif len(eff) > 0:
            handle_effect(eff)

    try:
        schema = ActionSchema(
            name=name,
            parameters=tuple(params),
            precondition=precondition,
            add_effects=tuple(dict.fromkeys(adds)),
            delete_effects=tuple(dict.fromkeys(dels)),
            cost=cost if cost is not None else 0,
        )
    except ValidationError as exc:
        raise ParseError(str(exc), form.line, form.column) from exc
    return schema, has_cost_effect


def _define_form(text: str, kind: str) -> SList:
    forms = [f for f in sexpr.read_all(text) if isinstance(f, SList)]
    for form in forms:
        if _head(form) == "define":
            if len(form) < 2:
                raise ParseError("empty define form", form.line, form.column)
            header = expect_list(form[1], f"({kind} <name>)")
            if len(header) == 2 and expect_atom(header[0], kind).lower() == kind:
                return form
    raise ParseError(f"no (define ({kind} ...)) form found")


def parse_domain(text: str) -> PlanningDomain:
    """Parse PDDL domain text into a validated PlanningDomain."""
    form = _define_form(text, "domain")
    header = expect_list(form[1], "(domain <name>)")
    name = _check_ident(expect_atom(header[1], "a domain name"), "domain name")

    requirements: set[str] = set()
    types: list[TypeDecl] = []
    predicates: list[Predicate] = []
    actions: list[ActionSchema] = []
    symbols = _SymbolTable()
    functions_declared = False
    any_cost_effect = False

    sections = [expect_list(node, "a domain section") for node in form.items[2:]]
    order = {":requirements": 0, ":types": 1, ":predicates": 2, ":functions": 3, ":action": 4}
    for section in sections:
        key = expect_atom(section[0], "a section keyword") if len(section) else None
        if key is None:
            raise ParseError("empty domain section", section.line, section.column)
        kw = key.lower()
        if kw not in order:
            raise UnsupportedConstructError(key.text, key.line, key.column)

    # Two passes: declarations first (in dependency order) so action
    # bodies can resolve them regardless of section order in the text.
    for section in sorted(sections, key=lambda s: order[expect_atom(s[0], "keyword").lower()]):
        kw = expect_atom(section[0], "keyword").lower()
        if kw == ":requirements":
            for node in section.items[1:]:
                tok = expect_atom(node, "a requirement flag")
                flag = tok.lower()
                if flag not in SUPPORTED_REQUIREMENTS:
                    raise UnsupportedConstructError(tok.text, tok.line, tok.column)
                requirements.add(flag)
        elif kw == ":types":
            for tok, parent in parse_typed_list(section.items[1:], variables=False):
                low = tok.text.lower()
                if low in symbols.types and low != OBJECT_TYPE:
                    raise ParseError(f"duplicate type '{tok.text}'", tok.line, tok.column)
                symbols.types[low] = tok.text
                types.append(TypeDecl(tok.text, parent))
            # re-spell parents with declared casing, verify they exist
            fixed = []
            for decl in types:
                parent = symbols.types.get(decl.parent.lower())
                if parent is None:
                    raise ParseError(f"undeclared parent type '{decl.parent}'")
                fixed.append(TypeDecl(decl.name, parent))
            types = fixed
        elif kw == ":predicates":
            for node in section.items[1:]:
                pform = expect_list(node, "a predicate declaration")
                if len(pform) == 0:
                    raise ParseError("empty predicate", pform.line, pform.column)
                ptok = expect_atom(pform[0], "a predicate name")
                pname = _check_ident(ptok, "predicate name")
                if pname.lower() in symbols.predicates:
                    raise ParseError(
                        f"duplicate predicate '{pname}'", ptok.line, ptok.column
                    )
                params = [
                    Parameter(tok.text, symbols.resolve_type(Atom(t, tok.line, tok.column)))
                    for tok, t in parse_typed_list(pform.items[1:], variables=True)
                ]
                pred = Predicate(pname, tuple(params))
                symbols.predicates[pname.lower()] = pred
                predicates.append(pred)
        elif kw == ":functions":
            for node in section.items[1:]:
                fform = expect_list(node, "a function declaration")
                ftok = expect_atom(fform[0], "a function name")
                if ftok.lower() != "total-cost" or len(fform) != 1:
                    raise UnsupportedConstructError(
                        f"function {ftok.text}", ftok.line, ftok.column
                    )
                functions_declared = True

    seen_actions: set[str] = set()
    for section in sections:
        kw = expect_atom(section[0], "keyword").lower()
        if kw == ":action":
            schema, has_cost = _parse_action(section, symbols)
            if schema.name.lower() in seen_actions:
                raise ParseError(
                    f"duplicate action '{schema.name}'", section.line, section.column
                )
            seen_actions.add(schema.name.lower())
            actions.append(schema)
            any_cost_effect = any_cost_effect or has_cost

    explicit = any_cost_effect or functions_declared or ":action-costs" in requirements
    if not explicit:
        # Unit-cost convention: every action costs 1 when the domain
        # declares no costs at all.
        actions = [
            ActionSchema(a.name, a.parameters, a.precondition, a.add_effects, a.delete_effects, 1)
            for a in actions
        ]

    try:
        return PlanningDomain(
            name=name,
            requirements=frozenset(requirements),
            types=tuple(types),
            predicates=tuple(predicates),
            actions=tuple(actions),
            explicit_costs=explicit,
        )
    except ValidationError as exc:
        raise ParseError(str(exc)) from exc


def parse_problem(text: str, domain: PlanningDomain) -> PlanningProblem:
    """Parse PDDL problem text and validate it against `domain`."""
    form = _define_form(text, "problem")
    header = expect_list(form[1], "(problem <name>)")
    name = _check_ident(expect_atom(header[1], "a problem name"), "problem name")

    symbols = _SymbolTable(domain)
    warnings: list[str] = []
    domain_name = ""
    objects: list[TypedObject] = []
    init: list[GroundAtom] = []
    goal: tuple[Literal, ...] = ()
    uses_cost = False

    for node in form.items[2:]:
        section = expect_list(node, "a problem section")
        key = expect_atom(section[0], "a section keyword") if len(section) else None
        if key is None:
            raise ParseError("empty problem section", section.line, section.column)
        kw = key.lower()
        if kw == ":domain":
            domain_name = _check_ident(expect_atom(section[1], "a domain name"), "domain name")
            if domain_name.lower() != domain.name.lower():
                warnings.append(
                    f"problem names domain '{domain_name}' but was parsed against "
                    f"'{domain.name}'"
                )
        elif kw == ":objects":
            for tok, type_name in parse_typed_list(section.items[1:], variables=False):
                resolved = symbols.resolve_type(Atom(type_name, tok.line, tok.column))
                objects.append(TypedObject(tok.text, resolved))
        elif kw == ":init":
            for item in section.items[1:]:
                iform = expect_list(item, "an init atom")
                if _head(iform) == "=":
                    # (= (total-cost) 0) initialises the metric
                    target = expect_list(iform[1], "(total-cost)")
                    if expect_atom(target[0], "total-cost").lower() != "total-cost":
                        raise UnsupportedConstructError(
                            "numeric fluent other than total-cost", iform.line, iform.column
                        )
                    uses_cost = True
                    continue
                if _head(iform) == "not":
                    raise UnsupportedConstructError(
                        "negated init atom", iform.line, iform.column
                    )
                init.append(parse_atom(iform, symbols, params=None))
        elif kw == ":goal":
            if len(section) != 2:
                raise ParseError("(:goal ...) takes one formula", section.line, section.column)
            goal = parse_condition(section[1], symbols, params=None)
        elif kw == ":metric":
            if (
                len(section) != 3
                or expect_atom(section[1], "minimize").lower() != "minimize"
            ):
                raise UnsupportedConstructError("metric", section.line, section.column)
            target = expect_list(section[2], "(total-cost)")
            if expect_atom(target[0], "total-cost").lower() != "total-cost":
                raise UnsupportedConstructError(
                    "metric other than total-cost", section.line, section.column
                )
            uses_cost = True
        else:
            raise UnsupportedConstructError(key.text, key.line, key.column)

    try:
        problem = PlanningProblem(
            name=name,
            domain_name=domain_name or domain.name,
            objects=tuple(objects),
            init=tuple(dict.fromkeys(init)),
            goal=goal,
            uses_total_cost=uses_cost,
            warnings=tuple(warnings),
        )
        for atom in problem.init:
            validate_ground_atom(atom, domain, problem, "init")
        for lit in problem.goal:
            validate_ground_atom(lit.atom, domain, problem, "goal")
    except ValidationError as exc:
        raise ParseError(str(exc)) from exc
    return problem
