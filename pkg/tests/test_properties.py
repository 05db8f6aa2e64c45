"""Property tests for the module invariants."""

import string

from hypothesis import given, settings, strategies as st

from ethiplan.ethics import EthicalFeature, EthicalRule, parse_ethical, print_ethical, validate_rules
from ethiplan.examplelib import get_example
from ethiplan.pddl import (
    ActionSchema,
    GroundAtom,
    Literal,
    Parameter,
    PlanningDomain,
    PlanningProblem,
    Predicate,
    TypedObject,
    parse_domain,
    parse_problem,
    serialize_domain,
    serialize_problem,
)
from ethiplan.transpile import WeightScheme

ident = st.from_regex(r"[a-z][a-z0-9-]{0,8}", fullmatch=True)


@st.composite
def domains(draw):
    pred_names = draw(
        st.lists(ident, min_size=1, max_size=4, unique_by=lambda s: s.lower())
    )
    predicates = tuple(
        Predicate(
            name,
            tuple(
                Parameter(f"?x{i}") for i in range(draw(st.integers(min_value=0, max_value=2)))
            ),
        )
        for name in pred_names
    )
    arity = {p.name: len(p.params) for p in predicates}

    action_names = draw(
        st.lists(ident, min_size=1, max_size=3, unique_by=lambda s: s.lower())
    )
    actions = []
    for name in action_names:
        nparams = draw(st.integers(min_value=0, max_value=2))
        params = tuple(Parameter(f"?v{i}") for i in range(nparams))

        def atom(pred):
            args = tuple(
                draw(st.sampled_from([p.name for p in params]))
                for _ in range(arity[pred])
            )
            return GroundAtom(pred, args)

        def atoms_from(pool):
            chosen = draw(st.lists(st.sampled_from(pool), max_size=2))
            return [atom(p) for p in chosen]

        usable = [p.name for p in predicates if arity[p.name] == 0 or nparams > 0]
        if not usable:
            usable = [p.name for p in predicates if arity[p.name] == 0]
        if not usable:
            continue
        pre = tuple(
            Literal(a, draw(st.booleans())) for a in atoms_from(usable)
        )
        adds = {a for a in atoms_from(usable)}
        dels = {a for a in atoms_from(usable)} - adds
        actions.append(
            ActionSchema(
                name=name,
                parameters=params,
                precondition=pre,
                add_effects=tuple(sorted(adds)),
                delete_effects=tuple(sorted(dels)),
                cost=1,
            )
        )
    return PlanningDomain(
        name=draw(ident),
        predicates=predicates,
        actions=tuple(actions),
    )


@settings(max_examples=60, deadline=None)
@given(domains())
def test_domain_roundtrip_property(domain):
    assert parse_domain(serialize_domain(domain)) == domain


@settings(max_examples=60, deadline=None)
@given(domains(), st.data())
def test_problem_roundtrip_property(domain, data):
    objects = tuple(
        TypedObject(f"o{i}") for i in range(data.draw(st.integers(min_value=1, max_value=3)))
    )
    names = [o.name for o in objects]
    init = []
    for pred in domain.predicates:
        if data.draw(st.booleans()):
            init.append(
                GroundAtom(
                    pred.name,
                    tuple(data.draw(st.sampled_from(names)) for _ in pred.params),
                )
            )
    goal_atoms = init[:1]
    problem = PlanningProblem(
        name="generated",
        domain_name=domain.name,
        objects=objects,
        init=tuple(dict.fromkeys(init)),
        goal=tuple(Literal(a, True) for a in goal_atoms),
    )
    assert parse_problem(serialize_problem(problem), domain) == problem


texts = st.text(
    alphabet=string.ascii_letters + string.digits + " .,;:'\"\\()?!-",
    max_size=60,
)


@st.composite
def av_rules(draw):
    entry = get_example("av-hospital-emergency")
    domain = parse_domain(entry.domain_text)
    schemas = list(domain.actions)
    count = draw(st.integers(min_value=0, max_value=3))
    rules = []
    used_ids = set()
    zero_ary = [p.name for p in domain.predicates if not p.params]
    for _ in range(count):
        rid = draw(ident.filter(lambda s: s.lower() not in used_ids))
        used_ids.add(rid.lower())
        schema = draw(st.sampled_from(schemas))
        condition = []
        for pred in draw(st.lists(st.sampled_from(zero_ary), max_size=2)):
            condition.append(Literal(GroundAtom(pred), draw(st.booleans())))
        features = tuple(
            EthicalFeature(f"feat-{i}", draw(st.sampled_from(["positive", "negative"])), draw(st.integers(1, 5)))
            for i in range(draw(st.integers(min_value=1, max_value=3)))
        )
        rules.append(
            EthicalRule(
                id=rid,
                trigger_action=schema.name,
                condition=tuple(condition),
                features=features,
                statement=draw(texts),
                principle=draw(texts),
                explanation=draw(texts),
            )
        )
    return domain, tuple(rules)


@settings(max_examples=60, deadline=None)
@given(av_rules())
def test_ethical_roundtrip_property(pair):
    domain, rules = pair
    text = print_ethical(rules)
    assert parse_ethical(text, domain) == rules
    assert print_ethical(parse_ethical(text, domain)) == text


@settings(max_examples=60, deadline=None)
@given(av_rules())
def test_validate_rules_is_total(pair):
    domain, rules = pair
    # also against a foreign domain where every trigger is unknown
    foreign = parse_domain(
        "(define (domain other) (:predicates (z)) "
        "(:action only :parameters () :precondition (and) :effect (and (z))))"
    )
    validate_rules(rules, domain)
    validate_rules(rules, foreign)


@settings(max_examples=100, deadline=None)
@given(
    st.integers(min_value=1, max_value=10_000),
    st.integers(min_value=2, max_value=1_000),
    st.integers(min_value=1, max_value=4),
)
def test_weight_strictly_increasing_and_dominant(scale, base, rank):
    scheme = WeightScheme(scale, base)
    assert scheme.weight(rank + 1) > scheme.weight(rank)
    # bounded lexicographic dominance: fewer than `base` firings at rank r
    # never outweigh one firing at rank r+1
    assert (base - 1) * scheme.weight(rank) < scheme.weight(rank + 1)
