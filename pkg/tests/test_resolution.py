import pytest

from hochschild import config
from hochschild import resolution as res
from hochschild.algebra import Path
from hochschild.ambiguity import max_ambiguity_degree
from hochschild.cohomology import generators
from hochschild.errors import ConstructionMismatch, DegreeMismatch, DegreeUnsupported
from hochschild.oracle import bar_chains

from .instances import build

OVERLAP = ([1, 7], [(2, 0, 3), (2, 2, 3), (2, 4, 3)], ())


@pytest.fixture(scope="module")
def overlap():
    return build(*OVERLAP)


def _right_multiples(alg, gen):
    """1 ⊗ gen ⊗ μ for every basis path μ leaving the target of gen."""
    for mu in alg.basis:
        if alg.source(mu) == gen.target:
            x = res.Tensor()
            x.add_term((Path.trivial(gen.source), gen, mu), 1)
            yield x


@pytest.mark.parametrize("name", ["golden", "canonical", "staircase", "overlap"])
def test_minimal_differential_squares_to_zero(request, name):
    alg = request.getfixturevalue(name)
    for level in range(2, max_ambiguity_degree(alg) + 1):
        for gen in generators(alg, level):
            once = res.minimal_differential(alg, level, res.pure(gen))
            assert res.minimal_differential(alg, level - 1, once) == {}


@pytest.mark.parametrize("name", ["golden", "canonical", "staircase"])
@pytest.mark.parametrize("level", [1, 2])
def test_homotopy_contracts(request, name, level):
    alg = request.getfixturevalue(name)
    for gen in generators(alg, level):
        for x in _right_multiples(alg, gen):
            up = res.minimal_differential(alg, level + 1, res.homotopy(alg, level, x))
            down = res.homotopy(alg, level - 1, res.minimal_differential(alg, level, x))
            assert up + down == x


def test_bar_differential_squares_to_zero(overlap):
    for chain in bar_chains(overlap, 3):
        once = res.bar_differential(overlap, 3, res.bar_pure(overlap, chain))
        assert res.bar_differential(overlap, 2, once) == {}


@pytest.mark.parametrize("name", ["canonical", "staircase", "overlap"])
@pytest.mark.parametrize("level", [1, 2, 3])
def test_phi_closed_form_matches_recursion(request, name, level):
    alg = request.getfixturevalue(name)
    for gen in generators(alg, level):
        assert res.phi_closed(alg, level, gen) == res.phi(alg, level, res.pure(gen))


@pytest.mark.parametrize("name", ["canonical", "staircase", "overlap"])
@pytest.mark.parametrize("level", [1, 2, 3])
def test_eta_closed_form_matches_recursion(request, name, level):
    alg = request.getfixturevalue(name)
    for chain in bar_chains(alg, level):
        assert res.eta_closed(alg, level, chain) == res.eta(alg, level, res.bar_pure(alg, chain))


@pytest.mark.parametrize("name", ["canonical", "staircase", "overlap"])
def test_eta_after_phi_is_identity(request, name):
    alg = request.getfixturevalue(name)
    for level in range(0, 4):
        for gen in generators(alg, level):
            assert res.eta(alg, level, res.phi(alg, level, res.pure(gen))) == res.pure(gen)


def test_phi_is_a_chain_map(overlap):
    for level in range(1, 4):
        for gen in generators(overlap, level):
            left = res.bar_differential(overlap, level, res.phi(overlap, level, res.pure(gen)))
            right = res.phi(overlap, level - 1, res.minimal_differential(overlap, level, res.pure(gen)))
            assert left == right


def test_recursion_cap(staircase, monkeypatch):
    monkeypatch.setattr(config, "RECURSION_CAP", 2)
    (gen,) = generators(staircase, 3)[:1]
    with pytest.raises(DegreeUnsupported):
        res.phi(staircase, 3, res.pure(gen))


def test_closed_forms_stop_at_level_three(staircase):
    (gen,) = generators(staircase, 4)
    with pytest.raises(DegreeUnsupported):
        res.phi_closed(staircase, 4, gen)
    with pytest.raises(DegreeMismatch):
        res.eta_closed(staircase, 2, (Path(1, 0, 1),))


def test_unknown_generator(golden):
    with pytest.raises(ConstructionMismatch):
        res.generator_at(golden, 3, (0, 0, 1))
