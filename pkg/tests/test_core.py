import random

import pytest

from logicgym.core import (
    PLACEHOLDER,
    ExpressivenessFlags,
    Level,
    Literal,
    Rule,
    VariableTable,
    clause_form,
    instantiate,
    negate,
)


def test_negate_flips_polarity_only():
    assert negate(Literal(0, 0, True)) == Literal(0, 0, False)
    assert negate(Literal(0, 0, False)) == Literal(0, 0, True)


def test_negate_is_involution():
    rng = random.Random(3)
    for _ in range(200):
        lit = Literal(rng.randrange(50), rng.randrange(2), rng.random() < 0.5)
        assert negate(negate(lit)) == lit


def test_instantiate_simple_rule():
    rule = Rule(
        premises=(Literal(0, PLACEHOLDER),),
        conclusions=(Literal(1, PLACEHOLDER),),
        universal=True,
    )
    g = instantiate(rule, 1)
    assert not g.universal
    assert g.premises == (Literal(0, 1),)
    assert g.conclusions == (Literal(1, 1),)


def test_instantiate_two_premise_rule():
    rule = Rule(
        premises=(Literal(0, PLACEHOLDER), Literal(1, PLACEHOLDER)),
        conclusions=(Literal(2, PLACEHOLDER),),
        universal=True,
    )
    g = instantiate(rule, 0)
    assert len(g.premises) == 2
    assert all(l.entity == 0 for l in g.premises + g.conclusions)


def test_instantiate_twice_shares_predicates_not_entities():
    rule = Rule(
        premises=(Literal(4, PLACEHOLDER),),
        conclusions=(Literal(5, PLACEHOLDER),),
        universal=True,
    )
    g0, g1 = instantiate(rule, 0), instantiate(rule, 1)
    assert g0.premises[0].predicate == g1.premises[0].predicate
    assert g0.premises[0].entity != g1.premises[0].entity


def test_instantiate_rejects_grounded():
    rule = Rule(premises=(Literal(0, 0),), conclusions=(Literal(1, 0),))
    with pytest.raises(ValueError):
        instantiate(rule, 0)


def test_instantiate_preserves_arity():
    rng = random.Random(5)
    for _ in range(50):
        np_, nc = rng.randint(1, 2), rng.randint(1, 2)
        rule = Rule(
            premises=tuple(Literal(i, PLACEHOLDER) for i in range(np_)),
            conclusions=tuple(Literal(10 + i, PLACEHOLDER) for i in range(nc)),
            universal=True,
        )
        g = instantiate(rule, rng.randrange(2))
        assert (len(g.premises), len(g.conclusions)) == (np_, nc)


def test_clause_form_literal_axiom():
    table = VariableTable()
    clause = clause_form(Literal(0, 0, True), table)
    assert clause == [1]


def test_clause_form_implication():
    table = VariableTable()
    rule = Rule(premises=(Literal(0, 0),), conclusions=(Literal(1, 0),))
    assert clause_form(rule, table) == [-1, 2]


def test_clause_form_conjunction_disjunction_signs():
    table = VariableTable()
    rule = Rule(
        premises=(Literal(0, 0), Literal(1, 0)),
        conclusions=(Literal(2, 0), Literal(3, 0)),
    )
    clause = clause_form(rule, table)
    assert clause == [-1, -2, 3, 4]


def test_clause_form_length_matches_rule_arity():
    table = VariableTable()
    rng = random.Random(9)
    for _ in range(100):
        np_, nc = rng.randint(1, 2), rng.randint(1, 2)
        rule = Rule(
            premises=tuple(Literal(rng.randrange(30), 0, rng.random() < 0.5) for _ in range(np_)),
            conclusions=tuple(Literal(30 + rng.randrange(30), 0, rng.random() < 0.5) for _ in range(nc)),
        )
        assert len(clause_form(rule, table)) == np_ + nc


def test_clause_form_rejects_universal():
    rule = Rule(
        premises=(Literal(0, PLACEHOLDER),),
        conclusions=(Literal(1, PLACEHOLDER),),
        universal=True,
    )
    with pytest.raises(ValueError):
        clause_form(rule, VariableTable())


def test_variable_table_is_dense_and_stable():
    table = VariableTable()
    a = table.var(Literal(7, 0))
    b = table.var(Literal(3, 1))
    assert (a, b) == (0, 1)
    assert table.var(Literal(7, 0, False)) == 0  # polarity does not change the atom
    assert table.atoms == [(7, 0), (3, 1)]


def test_flag_hierarchy_enforced():
    with pytest.raises(ValueError):
        ExpressivenessFlags(negation=True)
    with pytest.raises(ValueError):
        ExpressivenessFlags(conjunction=True, disjunction=True)
    with pytest.raises(ValueError):
        ExpressivenessFlags(conjunction=True, negation=True, quantification=True)


def test_level_round_trip():
    for level in Level:
        flags = ExpressivenessFlags.for_level(level)
        assert flags.level is level


def test_rule_validation():
    with pytest.raises(ValueError):
        Rule(premises=(), conclusions=(Literal(0, 0),))
    with pytest.raises(ValueError):
        Rule(premises=(Literal(0, 0),), conclusions=(Literal(1, PLACEHOLDER),), universal=True)
