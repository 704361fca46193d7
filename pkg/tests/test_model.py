from __future__ import annotations

import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ctxkit.errors import InputError
from ctxkit.fixtures import odd_cycle_model, sparable_model
from ctxkit.model import (
    DeterministicAssignment,
    Distribution,
    check_no_disturbance,
    deterministic_model,
    make_model,
    marginalize,
    mix,
    parse_rational,
    relabel_outcomes,
)
from ctxkit.scenario import Measurement, make_n_cycle, make_neighborhood_cover

from support import random_hv_model, random_path_model, random_weights


def test_parse_rational_accepts_exact_forms_only():
    assert parse_rational("3/4") == Fraction(3, 4)
    assert parse_rational("-2") == -2
    assert parse_rational(5) == 5
    for bad in ("0.5", "1e-3", "1/0", "abc", True, 0.5):
        with pytest.raises(InputError):
            parse_rational(bad)


def test_distribution_must_sum_to_one_and_be_nonnegative():
    ms = (Measurement("a", ("0", "1")),)
    with pytest.raises(InputError):
        Distribution(ms, {("0",): "1/2"})
    with pytest.raises(InputError):
        Distribution(ms, {("0",): "3/2", ("1",): "-1/2"})
    with pytest.raises(InputError):
        Distribution(ms, {("2",): 1})
    d = Distribution(ms, {("1",): 1})
    assert d[("0",)] == 0 and d.support() == [("1",)]


def test_model_needs_every_context_table():
    s = make_n_cycle(3)
    with pytest.raises(InputError):
        make_model(s, {("M_0", "M_1"): {("0", "0"): 1}})


@st.composite
def tables(draw):
    k = draw(st.integers(1, 4))
    ms = tuple(Measurement(f"x{i}", ("0", "1", "2")[: draw(st.integers(1, 3))]) for i in range(k))
    support = list(itertools.product(*(m.outcomes for m in ms)))
    raw = draw(st.lists(st.integers(0, 5), min_size=len(support), max_size=len(support)))
    if not any(raw):
        raw[0] = 1
    total = sum(raw)
    return Distribution(ms, {t: Fraction(r, total) for t, r in zip(support, raw)})


@settings(max_examples=100, deadline=None)
@given(tables(), st.data())
def test_marginalize_composes(d, data):
    ids = list(d.ids)
    outer = data.draw(st.lists(st.sampled_from(ids), min_size=1, unique=True))
    inner = data.draw(st.lists(st.sampled_from(outer), min_size=1, unique=True))
    assert marginalize(marginalize(d, outer), inner) == marginalize(d, inner)
    assert sum(marginalize(d, outer).weights.values()) == 1
    assert marginalize(d, ids) == d


def test_marginalize_rejects_foreign_and_empty():
    d = Distribution((Measurement("a", ("0", "1")),), {("0",): 1})
    with pytest.raises(InputError):
        marginalize(d, ["b"])
    with pytest.raises(InputError):
        marginalize(d, [])


@pytest.mark.parametrize("width", [2, 3, 4])
def test_deterministic_models_satisfy_marginal_condition(width):
    s = make_neighborhood_cover(5, width)
    rng = random.Random(width)
    for _ in range(10):
        a = DeterministicAssignment({x: rng.choice("01") for x in s.ids})
        m = deterministic_model(s, a)
        assert check_no_disturbance(m) == []
        for ctx in s.cover:
            assert m.probability(ctx, a.restrict(ctx)) == 1


def test_mix_properties():
    rng = random.Random(3)
    s = make_n_cycle(4)
    m1, m2 = random_hv_model(s, rng), random_hv_model(s, rng)
    assert mix([(Fraction(1), m1)]) == m1
    w = Fraction(2, 7)
    assert mix([(w, m1), (1 - w, m2)]) == mix([(1 - w, m2), (w, m1)])
    assert check_no_disturbance(mix([(w, m1), (1 - w, m2)])) == []
    with pytest.raises(InputError):
        mix([(Fraction(1, 2), m1)])
    with pytest.raises(InputError):
        mix([(Fraction(1), m1), (Fraction(1), make_model(make_n_cycle(3), {c: {("0", "0"): 1} for c in make_n_cycle(3).cover}))])


def test_random_path_models_are_nondisturbing():
    rng = random.Random(11)
    for n in range(3, 7):
        assert check_no_disturbance(random_path_model(n, rng)) == []


def test_fixture_models_satisfy_marginal_condition():
    assert check_no_disturbance(sparable_model()) == []
    assert check_no_disturbance(odd_cycle_model(5)) == []


def test_disturbance_violation_names_the_measurement():
    s = make_n_cycle(3)
    tables = {c: {("0", "0"): 1} for c in s.cover}
    tables[("M_0", "M_1")] = {("0", "1"): 1}
    [v] = check_no_disturbance(make_model(s, tables))
    assert v.differing_measurements() == ["M_1"]


def test_relabel_is_an_involution_for_swaps():
    m = sparable_model()
    swap = {"0": "1", "1": "0"}
    r = relabel_outcomes(m, "b", swap)
    assert r != m
    assert relabel_outcomes(r, "b", swap) == m
    with pytest.raises(InputError):
        relabel_outcomes(m, "b", {"0": "0", "1": "0"})


def test_random_weights_sum_to_one():
    rng = random.Random(0)
    for k in range(1, 6):
        assert sum(random_weights(rng, k)) == 1
