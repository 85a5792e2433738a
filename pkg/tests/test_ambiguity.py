import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hochschild.algebra import Path, validate_and_build
from hochschild.ambiguity import (
    ambiguities_in,
    full_ambiguities,
    max_ambiguity_degree,
    n_ambiguities,
    reduction_system,
)
from hochschild.errors import DegreeMismatch

from .instances import build
from .strategies import toupie_specs


def test_golden_reduction_system(golden):
    rules = reduction_system(golden)
    assert len(rules) == 6
    assert sum(rule.is_monomial for rule in rules) == 5
    pivot_rule = rules[-1]
    assert pivot_rule.tip == golden.full(4)
    assert pivot_rule.replacement == golden.pivot_tail(0)


def test_golden_ambiguities(golden):
    assert [w.key for w in n_ambiguities(golden, 1)] == [(3, s, s + 4) for s in range(5)]
    assert [w.key for w in n_ambiguities(golden, 2)] == [(3, 0, 5), (3, 1, 6), (3, 2, 7), (3, 3, 8)]
    assert [w.key for w in n_ambiguities(golden, 3)] == [(3, 0, 8)]
    assert n_ambiguities(golden, 4) == []
    assert max_ambiguity_degree(golden) == 4


def test_golden_factorizations(golden):
    (w,) = n_ambiguities(golden, 3)
    assert w.label() == "amb(4,0,8)"
    assert w.factorization_left == [Path(3, 0, 1), Path(3, 1, 3), Path(3, 4, 1), Path(3, 5, 3)]
    assert w.factorization_right == [Path(3, 0, 3), Path(3, 3, 1), Path(3, 4, 3), Path(3, 7, 1)]
    two = n_ambiguities(golden, 2)[0]
    assert two.left_cuts == (0, 1, 4, 5)
    assert two.right_cuts == (5, 4, 1, 0)


def test_full_ambiguities(golden, staircase):
    assert [w.label() for w in full_ambiguities(golden, 3)] == ["amb(4,0,8)"]
    assert full_ambiguities(golden, 2) == []
    assert [w.key for w in full_ambiguities(staircase, 3)] == [(1, 0, 4)]
    assert max_ambiguity_degree(staircase) == 4


def test_ambiguities_inside_a_path(golden):
    inside = ambiguities_in(golden, Path(3, 0, 6), 2)
    assert [w.key for w in inside] == [(3, 0, 5), (3, 1, 6)]
    assert ambiguities_in(golden, golden.full(2), 2) == []


def test_no_windows_no_ambiguities(relation_free, canonical):
    for alg in (relation_free, canonical):
        assert n_ambiguities(alg, 2) == []
        assert max_ambiguity_degree(alg) == 2


def test_degree_must_be_positive(golden):
    with pytest.raises(DegreeMismatch):
        n_ambiguities(golden, 0)


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 5), st.integers(1, 6))
def test_equally_spaced_windows(width, count):
    # windows of one width starting at every offset 0 .. count - 1
    alg = build([width + count - 1], [(1, s, width) for s in range(count)])
    assert len(n_ambiguities(alg, 2)) == count - 1


@settings(max_examples=30, deadline=None)
@given(toupie_specs())
def test_ambiguities_are_chains(spec):
    alg = validate_and_build(spec)
    top = max_ambiguity_degree(alg)
    for n in range(2, top):
        for w in n_ambiguities(alg, n):
            left, right = w.factorization_left, w.factorization_right
            assert len(left) == len(right) == n + 1
            assert sum(p.length for p in left) == w.end - w.start
            assert sum(p.length for p in right) == w.end - w.start
            prefixes = ambiguities_in(alg, w.path, n - 1)
            assert any(v.start == w.start for v in prefixes)
