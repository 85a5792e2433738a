import pytest

from hochschild.cohomology import cochain_space, hh_basis, hh_dimensions
from hochschild.errors import BudgetExceeded, DegreeMismatch
from hochschild.gerstenhaber import action_matrix, bracket_deg1_degn, bracket_table
from hochschild.linalg import RationalMatrix
from hochschild.oracle import (
    bar_chains,
    bar_cochain_space,
    bar_differential,
    eta_star,
    is_coboundary,
    lift,
    oracle_action,
    oracle_bracket_deg1,
    oracle_dimensions,
    oracle_vanishing_check,
    phi_star,
    run_oracle,
)


def _element(alg, degree, label):
    basis = hh_basis(alg, degree)
    return basis.element(basis.labels.index(label))


def _identity(n):
    m = RationalMatrix(n, n)
    for i in range(n):
        m.add(i, i, 1)
    return m


def test_bar_and_minimal_dimensions_agree(small):
    assert oracle_dimensions(small, 4) == hh_dimensions(small, 4)


def test_staircase_reaches_degree_four(staircase):
    assert oracle_dimensions(staircase, 5) == [1, 1, 0, 0, 1, 0]


@pytest.mark.slow
def test_golden_oracle(golden):
    report = run_oracle(golden, 4)
    assert report.bar_dimensions == [1, 10, 3, 0, 4]
    assert report.action_pairs == 10 * (3 + 0 + 4)
    assert report.action_mismatches == []
    assert report.agrees


def test_bar_differential_squares_to_zero(small):
    for n in range(3):
        assert (bar_differential(small, n + 1) @ bar_differential(small, n)).is_zero()


@pytest.mark.parametrize("name", ["kronecker2", "canonical", "staircase"])
def test_phi_star_after_eta_star_is_identity(request, name):
    alg = request.getfixturevalue(name)
    for n in range(4):
        dim = cochain_space(alg, n).dim
        assert phi_star(alg, n) @ eta_star(alg, n) == _identity(dim)


def test_closed_and_recursive_comparison_maps_agree(staircase):
    for n in range(1, 4):
        assert eta_star(staircase, n, closed=True) == eta_star(staircase, n, closed=False)
        assert phi_star(staircase, n, closed=True) == phi_star(staircase, n, closed=False)


def test_lift_is_a_cocycle(canonical):
    for degree in (1, 2):
        basis = hh_basis(canonical, degree)
        for i in range(len(basis)):
            vec = lift(canonical, basis.element(i))
            image = bar_differential(canonical, degree) @ RationalMatrix.from_columns(
                bar_cochain_space(canonical, degree).dim, [vec]
            )
            assert image.is_zero()
            assert not is_coboundary(canonical, vec, degree)


@pytest.mark.parametrize("name", ["kronecker3", "canonical", "staircase"])
def test_brackets_agree_with_the_bar_complex(request, name):
    alg = request.getfixturevalue(name)
    table = bracket_table(alg)
    basis = hh_basis(alg, 1)
    for (i, j), expected in table.entries.items():
        assert oracle_bracket_deg1(alg, basis.element(i), basis.element(j)) == expected


@pytest.mark.parametrize("name", ["canonical", "staircase", "kronecker2"])
def test_cup_products_vanish(request, name):
    alg = request.getfixturevalue(name)
    assert oracle_vanishing_check(alg, (1, 1), "cup")


def test_brackets_of_degree_two_vanish(canonical):
    assert oracle_vanishing_check(canonical, (2, 2), "bracket")


def test_vanishing_check_degrees(canonical):
    with pytest.raises(DegreeMismatch):
        oracle_vanishing_check(canonical, (1, 2), "bracket")
    with pytest.raises(DegreeMismatch):
        oracle_vanishing_check(canonical, (0, 1), "cup")


def test_run_oracle_on_small_instances(small):
    report = run_oracle(small, 3)
    assert report.budget_error is None
    assert report.agrees
    assert report.bracket_pairs == len(hh_basis(small, 1)) ** 2
    one = len(hh_basis(small, 1))
    assert report.action_pairs == one * (len(hh_basis(small, 2)) + len(hh_basis(small, 3)))
    assert report.action_mismatches == []


def test_budget(golden):
    with pytest.raises(BudgetExceeded) as info:
        bar_chains(golden, 2, budget=10)
    assert info.value.budget == 10
    report = run_oracle(golden, 4, budget=10)
    assert report.budget_error is not None
    assert report.budget_error.degree == 1
    assert report.bar_dimensions == []
    assert report.action_pairs == 0


def test_golden_low_degrees(golden):
    assert oracle_dimensions(golden, 1) == [1, 10]
    assert oracle_vanishing_check(golden, (1, 1), "cup")
    w12, w21 = _element(golden, 1, "w12"), _element(golden, 1, "w21")
    expected = bracket_table(golden).get("w12", "w21")
    assert not expected.is_zero()
    assert oracle_bracket_deg1(golden, w12, w21) == expected


@pytest.mark.parametrize(
    "left, right, image",
    [("w12", "rho1‖a1", "rho1‖a2"), ("x2", "rho1‖a1", "rho1‖a1"), ("t1", "rho1‖a3", "rho1‖a3")],
)
def test_golden_action_on_the_bar_complex(golden, left, right, image):
    f, v = _element(golden, 1, left), _element(golden, 2, right)
    got = oracle_action(golden, f, v)
    assert got == bracket_deg1_degn(golden, f, v)
    assert not got.is_zero()
    assert set(got.coordinates) == {hh_basis(golden, 2).labels.index(image)}


@pytest.mark.parametrize("name", ["canonical", "staircase", "commutative_square"])
def test_actions_agree_with_the_bar_complex(request, name):
    alg = request.getfixturevalue(name)
    one = hh_basis(alg, 1)
    for n in (2, 3):
        target = hh_basis(alg, n)
        for i in range(len(one)):
            for j, expected in enumerate(action_matrix(alg, one.element(i), n)):
                assert oracle_action(alg, one.element(i), target.element(j)) == expected


def test_oracle_action_degrees(canonical):
    one = hh_basis(canonical, 1)
    with pytest.raises(DegreeMismatch):
        oracle_action(canonical, one.element(0), one.element(0))
