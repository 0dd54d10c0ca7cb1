from __future__ import annotations

import pytest

from conftest import ca, ra
from lite_repair.model import (
    PrioritizedKB,
    Role,
    StratifiedAssertions,
    Stratum,
    assertion_key,
    sorted_assertions,
)


def test_role_inverse_flips_and_double_inverse_restores():
    role = Role("P")
    assert role.inverse() == Role("P", True)
    assert role.inverse().inverse() == role
    assert Role("P", True).inverse() == Role("P")


def test_role_render():
    assert Role("P").render() == "P"
    assert Role("P", True).render() == "P-"


def test_assertion_total_order_is_rendered_form():
    items = [ra("R", "a", "z"), ca("A", "b"), ca("A", "a")]
    assert [a.render() for a in sorted_assertions(items)] == [
        "A(a)",
        "A(b)",
        "R(a, z)",
    ]
    assert assertion_key(ca("A", "a")) == "A(a)"


def test_union_up_to_prefixes():
    layers = StratifiedAssertions(
        (
            frozenset({ca("A", "a")}),
            frozenset({ca("A", "b")}),
            frozenset({ca("B", "a")}),
        )
    )
    assert layers.union_up_to(0) == frozenset()
    assert layers.union_up_to(2) == {ca("A", "a"), ca("A", "b")}
    assert layers.union() == {ca("A", "a"), ca("A", "b"), ca("B", "a")}


def test_union_up_to_rejects_out_of_range():
    layers = StratifiedAssertions((frozenset(),))
    with pytest.raises(ValueError):
        layers.union_up_to(2)
    with pytest.raises(ValueError):
        layers.union_up_to(-1)


def test_union_up_to_monotone():
    layers = StratifiedAssertions(
        (
            frozenset({ca("A", "a"), ra("R", "a", "b")}),
            frozenset(),
            frozenset({ca("B", "c"), ca("A", "a")}),
        )
    )
    previous = frozenset()
    for k in range(layers.layer_count + 1):
        current = layers.union_up_to(k)
        assert previous <= current
        previous = current


def test_prioritized_kb_requires_contiguous_indices():
    with pytest.raises(ValueError):
        PrioritizedKB(tbox=frozenset(), strata=(Stratum(2, frozenset()),))
    with pytest.raises(ValueError):
        PrioritizedKB(tbox=frozenset(), strata=())


def test_ex_fixture_shape(ex_kb):
    assert ex_kb.layer_count == 5
    assert ex_kb.strata[0].assertions == {ca("A", "a"), ra("R", "a", "z"), ca("A", "c")}
    assert ex_kb.layers().union_up_to(1) == ex_kb.strata[0].assertions
    # duplicate witness across strata is kept once per stratum
    assert ra("R", "e", "z") in ex_kb.strata[3].assertions
    assert ra("R", "e", "z") in ex_kb.strata[4].assertions
