import pytest
from sympy import QQ

from hochschild.algebra import validate_and_build
from hochschild.errors import ParseError
from hochschild.report import (
    ReportDocument,
    build_report,
    default_max_degree,
    load_document,
    parse_document,
    parse_rational,
    render_text,
)

from .instances import SAMPLES


@pytest.mark.parametrize("text, value", [("3", QQ(3)), ("-1/2", QQ(-1, 2)), (" 4 / 6 ", QQ(2, 3)), (7, QQ(7))])
def test_parse_rational(text, value):
    assert parse_rational(text) == value


@pytest.mark.parametrize("text", ["0.5", "1/0", "x", True, "1e3"])
def test_parse_rational_rejects(text):
    with pytest.raises(ParseError):
        parse_rational(text)


def test_floats_are_rejected():
    text = 'branches = [2, 2]\n[[linear_relations]]\ncoefficients = { "1" = 0.5, "2" = -1 }\n'
    with pytest.raises(ParseError) as info:
        parse_document(text)
    assert info.value.location == "linear_relations[0].coefficients.1"


def test_unknown_keys_are_rejected():
    with pytest.raises(ParseError) as info:
        parse_document("branches = [1]\ncolour = 3\n")
    assert info.value.location == "colour"


def test_broken_toml():
    with pytest.raises(ParseError):
        parse_document("branches = [1,")


def test_rational_strings_reach_the_spec():
    doc = parse_document('branches = [2, 2]\n[[linear_relations]]\ncoefficients = { "1" = "2/3", "2" = -1 }\n')
    spec = doc.to_spec()
    assert spec.linear_relations == ({1: QQ(2, 3), 2: QQ(-1)},)


def test_missing_file(tmp_path):
    with pytest.raises(ParseError):
        load_document(str(tmp_path / "absent.toml"))


def test_golden_sample_matches_fixture(golden):
    alg = validate_and_build(load_document(str(SAMPLES / "golden.toml")).to_spec())
    assert alg.invariants() == golden.invariants()
    assert alg.windows == golden.windows


def test_golden_report(golden):
    report = build_report(golden)
    assert default_max_degree(golden) == 5
    assert report.max_degree == 5
    assert report.zero_above == 4
    assert [d.dimension for d in report.degrees] == [1, 10, 3, 0, 4, 0]
    assert report.lie.decomposition == "⟨y4⟩ ⊕ sl_2 ⋉ (⟨t1,t2⟩ ⋉ ⟨z13,z23,z16,z26⟩)"
    assert len(report.actions) == 24
    assert [m.degree for m in report.modules] == [2, 4]
    assert report.degrees[2].coordinates[0] == {"rho1‖a1": "1"}
    assert report.invariants.D == 4


def test_report_round_trip(golden):
    report = build_report(golden)
    text = report.to_json()
    assert ReportDocument.model_validate_json(text) == report
    assert build_report(golden).to_json() == text


def test_render_text(golden, kronecker2):
    text = render_text(build_report(golden))
    assert "HH^4: dim 4" in text
    assert "HH^i = 0 for i > 4" in text
    assert "[w12, rho1‖a1] = rho1‖a2" in text
    small = render_text(build_report(kronecker2))
    assert "semisimple: yes" in small
    assert "Action of HH^1 on HH^n (nonzero)\n  none" in small
