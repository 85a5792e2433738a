"""
Input documents (TOML) and report documents (JSON / text).
"""

import logging
import re
import sys

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib
from typing import Optional

from pydantic import BaseModel, ConfigDict, StrictInt, ValidationError, field_validator

from .algebra import QuiverSpec, ToupieAlgebra, format_rational
from .ambiguity import max_ambiguity_degree
from .cohomology import hh_basis
from .errors import NotApplicable, ParseError
from .gerstenhaber import action_matrix, bracket_table
from .lie import lie_report, module_decomposition
from .linalg import q
from .oracle import OracleReport

logger = logging.getLogger(__name__)

_RATIONAL = re.compile(r"^\s*(-?\d+)\s*(?:/\s*(\d+)\s*)?$")


def parse_rational(text: str | int):
    """Exact rational from an int or a "p/q" / "n" string; anything else is a ParseError."""
    if isinstance(text, bool):
        raise ParseError(f"{text!r} is not a rational")
    if isinstance(text, int):
        return q(text)
    match = _RATIONAL.match(text)
    if match is None:
        raise ParseError(f"{text!r} is not an exact rational (write p/q)")
    num, den = int(match.group(1)), int(match.group(2) or 1)
    if den == 0:
        raise ParseError(f"{text!r} has a zero denominator")
    return q(num) / q(den)


# ─── Input ──────────────────────────────────────────────────────

class MonomialRelationIn(BaseModel):
    model_config = ConfigDict(extra="forbid")

    branch: StrictInt
    start: StrictInt
    length: StrictInt


class LinearRelationIn(BaseModel):
    model_config = ConfigDict(extra="forbid")

    coefficients: dict[str, StrictInt | str]

    @field_validator("coefficients")
    @classmethod
    def _exact(cls, value: dict[str, int | str]) -> dict[str, int | str]:
        for branch, coeff in value.items():
            if not branch.strip().isdigit():
                raise ValueError(f"branch key {branch!r} is not a branch number")
            try:
                parse_rational(coeff)
            except ParseError as exc:
                raise ValueError(exc.detail) from exc
        return value


class Options(BaseModel):
    model_config = ConfigDict(extra="forbid")

    max_degree: Optional[StrictInt] = None
    oracle_budget: Optional[StrictInt] = None


class InputDocument(BaseModel):
    model_config = ConfigDict(extra="forbid")

    branches: list[StrictInt]
    monomial_relations: list[MonomialRelationIn] = []
    linear_relations: list[LinearRelationIn] = []
    options: Options = Options()

    def to_spec(self) -> QuiverSpec:
        return QuiverSpec.build(
            self.branches,
            [(m.branch, m.start, m.length) for m in self.monomial_relations],
            [
                {int(b): parse_rational(c) for b, c in rel.coefficients.items()}
                for rel in self.linear_relations
            ],
        )


def _find_floats(value, path: str) -> list[str]:
    if isinstance(value, float):
        return [path]
    if isinstance(value, dict):
        return [p for k, v in value.items() for p in _find_floats(v, f"{path}.{k}" if path else k)]
    if isinstance(value, list):
        return [p for i, v in enumerate(value) for p in _find_floats(v, f"{path}[{i}]")]
    return []


def parse_document(text: str) -> InputDocument:
    try:
        raw = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ParseError(f"invalid TOML: {exc}") from exc
    floats = _find_floats(raw, "")
    if floats:
        raise ParseError("floats are not allowed, write exact rationals as \"p/q\"", location=floats[0])
    try:
        return InputDocument.model_validate(raw)
    except ValidationError as exc:
        first = exc.errors()[0]
        where = ".".join(str(part) for part in first["loc"])
        details = "; ".join(
            f"{'.'.join(str(p) for p in err['loc'])}: {err['msg']}" for err in exc.errors()
        )
        raise ParseError(details, location=where) from exc


def load_document(path: str) -> InputDocument:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}", location=path) from exc
    return parse_document(text)


# ─── Report ─────────────────────────────────────────────────────

class InvariantsOut(BaseModel):
    a: int
    l: int
    m: int
    n: int
    r: int
    D: int
    d: int
    rank: int
    num_vertices: int
    num_arrows: int


class DegreeOut(BaseModel):
    degree: int
    dimension: int
    labels: list[str]
    coordinates: list[dict[str, str]]  # cochain basis label -> "p/q"


class BracketOut(BaseModel):
    left: str
    right: str
    value: str


class LieOut(BaseModel):
    abelian: bool
    reason: str
    center: list[str]
    radical: list[str]
    center_part: list[str] = []
    sl_part: dict[str, str] = {}
    s1: list[str] = []
    l2: list[str] = []
    semisimple: Optional[bool] = None
    decomposition: str = ""
    notes: list[str] = []


class ComponentOut(BaseModel):
    generator: str
    class_basis: list[str]
    indecomposable: bool
    irreducible: bool


class ModuleOut(BaseModel):
    degree: int
    components: list[ComponentOut]
    standard_multiplicity: int
    trivial_multiplicity: int
    notes: list[str] = []


class OracleOut(BaseModel):
    max_degree: int
    minimal_dimensions: list[int]
    bar_dimensions: list[int]
    bracket_pairs: int
    bracket_mismatches: list[str] = []
    action_pairs: int = 0
    action_mismatches: list[str] = []
    vanishing: dict[str, bool] = {}
    budget_exceeded: Optional[str] = None
    agrees: bool


class ReportDocument(BaseModel):
    branch_order: list[int]
    invariants: InvariantsOut
    max_degree: int
    zero_above: int  # HH^i = 0 for every i > zero_above
    degrees: list[DegreeOut]
    brackets: list[BracketOut]
    actions: list[BracketOut]
    lie: LieOut
    modules: list[ModuleOut] = []
    oracle: Optional[OracleOut] = None

    def to_json(self) -> str:
        return self.model_dump_json(indent=2, exclude_none=True)


def default_max_degree(alg: ToupieAlgebra) -> int:
    return max_ambiguity_degree(alg) + 1


def _degree_out(alg: ToupieAlgebra, i: int) -> DegreeOut:
    basis = hh_basis(alg, i)
    coordinates = [
        {basis.space.basis[j].label(alg): format_rational(c) for j, c in sorted(vec.items())}
        for vec in basis.vectors
    ]
    return DegreeOut(degree=i, dimension=len(basis), labels=list(basis.labels), coordinates=coordinates)


def _actions(alg: ToupieAlgebra, max_degree: int) -> list[BracketOut]:
    one = hh_basis(alg, 1)
    out = []
    for n in range(2, max_degree + 1):
        target = hh_basis(alg, n)
        for i, label in enumerate(one.labels):
            for j, image in enumerate(action_matrix(alg, one.element(i), n)):
                if not image.is_zero():
                    out.append(BracketOut(left=label, right=target.labels[j], value=image.pretty()))
    return out


def oracle_out(report: OracleReport) -> OracleOut:
    return OracleOut(
        max_degree=report.max_degree,
        minimal_dimensions=report.minimal_dimensions,
        bar_dimensions=report.bar_dimensions,
        bracket_pairs=report.bracket_pairs,
        bracket_mismatches=report.bracket_mismatches,
        action_pairs=report.action_pairs,
        action_mismatches=report.action_mismatches,
        vanishing=report.vanishing,
        budget_exceeded=report.budget_error.detail if report.budget_error else None,
        agrees=report.agrees,
    )


def build_report(alg: ToupieAlgebra, max_degree: int | None = None) -> ReportDocument:
    top = default_max_degree(alg) if max_degree is None else max_degree
    table = bracket_table(alg)
    lie = lie_report(alg)
    modules = []
    for n in range(2, top + 1):
        if not len(hh_basis(alg, n)):
            continue
        try:
            dec = module_decomposition(alg, n)
        except NotApplicable as exc:
            logger.debug("no module decomposition for HH^%d: %s", n, exc.detail)
            continue
        modules.append(ModuleOut(
            degree=dec.degree,
            components=[ComponentOut(**vars(c)) for c in dec.components],
            standard_multiplicity=dec.standard_multiplicity,
            trivial_multiplicity=dec.trivial_multiplicity,
            notes=dec.notes,
        ))
    return ReportDocument(
        branch_order=list(alg.branch_order),
        invariants=InvariantsOut(**alg.invariants()),
        max_degree=top,
        zero_above=max_ambiguity_degree(alg),
        degrees=[_degree_out(alg, i) for i in range(top + 1)],
        brackets=[BracketOut(left=x, right=y, value=v) for x, y, v in table.nonzero()],
        actions=_actions(alg, top),
        lie=LieOut(**vars(lie)),
        modules=modules,
    )


def render_text(doc: ReportDocument) -> str:
    inv = doc.invariants
    lines = [
        "Toupie algebra",
        f"  canonical branch order (input numbers): {', '.join(map(str, doc.branch_order))}",
        f"  a={inv.a} l={inv.l} m={inv.m} n={inv.n} r={inv.r} D={inv.D} d={inv.d}"
        f"  vertices={inv.num_vertices} arrows={inv.num_arrows}",
        "",
        "Hochschild cohomology",
    ]
    for deg in doc.degrees:
        shown = ", ".join(deg.labels) if deg.labels else "-"
        lines.append(f"  HH^{deg.degree}: dim {deg.dimension}  [{shown}]")
    lines.append(f"  HH^i = 0 for i > {doc.zero_above}")
    lines += ["", "Brackets on HH^1 (nonzero)"]
    lines += [f"  [{b.left}, {b.right}] = {b.value}" for b in doc.brackets] or ["  none"]
    lines += ["", "Action of HH^1 on HH^n (nonzero)"]
    lines += [f"  [{b.left}, {b.right}] = {b.value}" for b in doc.actions] or ["  none"]
    lie = doc.lie
    lines += ["", "Lie structure of HH^1", f"  {lie.decomposition}", f"  {lie.reason}"]
    lines.append(f"  center: {', '.join(lie.center) or '0'}")
    lines.append(f"  radical: {', '.join(lie.radical) or '0'}")
    if lie.semisimple is not None:
        lines.append(f"  semisimple: {'yes' if lie.semisimple else 'no'}")
    lines += [f"  note: {note}" for note in lie.notes]
    for mod in doc.modules:
        lines += ["", f"HH^{mod.degree} as an HH^1-module"]
        for comp in mod.components:
            kind = "irreducible" if comp.irreducible else "indecomposable"
            lines.append(f"  V_{comp.generator} ({kind}): {', '.join(comp.class_basis)}")
        lines.append(f"  standard summands: {mod.standard_multiplicity}, trivial: {mod.trivial_multiplicity}")
        lines += [f"  note: {note}" for note in mod.notes]
    if doc.oracle is not None:
        lines += ["", *render_oracle_lines(doc.oracle)]
    return "\n".join(lines) + "\n"


def render_oracle_lines(o: OracleOut) -> list[str]:
    lines = [
        "Bar complex oracle",
        f"  minimal dims: {o.minimal_dimensions}",
        f"  bar dims:     {o.bar_dimensions}",
        f"  bracket pairs checked: {o.bracket_pairs}, mismatches: {len(o.bracket_mismatches)}",
    ]
    lines += [f"  mismatch {m}" for m in o.bracket_mismatches]
    lines.append(f"  action pairs checked: {o.action_pairs}, mismatches: {len(o.action_mismatches)}")
    lines += [f"  mismatch {m}" for m in o.action_mismatches]
    lines += [f"  vanishing {name}: {'ok' if ok else 'FAILED'}" for name, ok in o.vanishing.items()]
    if o.budget_exceeded:
        lines.append(f"  stopped early: {o.budget_exceeded}")
    lines.append(f"  agreement: {'yes' if o.agrees else 'NO'}")
    return lines
