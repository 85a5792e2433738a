"""
Lie structure of HH¹(A) and the HH¹-module structure of HH^n(A).

All statements are certified on rational structure constants taken from the
bracket table; nothing here needs complex numbers.
"""

import logging
from dataclasses import dataclass, field

from sympy import QQ

from .algebra import ToupieAlgebra, format_combination
from .ambiguity import full_ambiguities
from .cohomology import hh1_basis, hh_basis
from .errors import AbelianInput, ConstructionMismatch, NotApplicable
from .gerstenhaber import action_matrix, bracket_table
from .linalg import RationalMatrix, Vector

logger = logging.getLogger(__name__)

ENVELOPING_NOTE = (
    "HH^1(A) is abelian, so its universal enveloping algebra is the polynomial "
    "algebra in dim HH^1(A) variables"
)


@dataclass
class LieReport:
    abelian: bool
    reason: str
    center: list[str]
    radical: list[str]
    center_part: list[str] = field(default_factory=list)
    sl_part: dict[str, str] = field(default_factory=dict)
    s1: list[str] = field(default_factory=list)
    l2: list[str] = field(default_factory=list)
    semisimple: bool | None = None
    decomposition: str = ""
    notes: list[str] = field(default_factory=list)


@dataclass
class ModuleComponent:
    generator: str
    class_basis: list[str]
    indecomposable: bool = True
    irreducible: bool = False


@dataclass
class ModuleDecomposition:
    degree: int
    components: list[ModuleComponent]
    standard_multiplicity: int
    trivial_multiplicity: int
    notes: list[str] = field(default_factory=list)


# ─── Structure constants ────────────────────────────────────────

def _structure(alg: ToupieAlgebra) -> tuple[int, dict[tuple[int, int], Vector]]:
    table = bracket_table(alg)
    return len(table.labels), {k: v.coordinates for k, v in table.entries.items()}


def _bracket_vectors(consts: dict[tuple[int, int], Vector], x: Vector, y: Vector) -> Vector:
    out: Vector = {}
    for i, ci in x.items():
        for j, cj in y.items():
            for k, c in consts[(i, j)].items():
                new = out.get(k, QQ(0)) + ci * cj * c
                if new == 0:
                    out.pop(k, None)
                else:
                    out[k] = new
    return out


def _span_rank(dim: int, vectors: list[Vector]) -> int:
    vectors = [v for v in vectors if v]
    return RationalMatrix.from_columns(dim, vectors).rank() if vectors else 0


def _inside(dim: int, span: list[Vector], vectors: list[Vector]) -> bool:
    base = _span_rank(dim, span)
    return _span_rank(dim, span + vectors) == base


def _labels_of(alg: ToupieAlgebra, family: str) -> list[str]:
    basis = hh1_basis(alg)
    return [label for label, tag in zip(basis.labels, basis.tags) if tag[0] == family]


def _units(alg: ToupieAlgebra, labels: list[str]) -> list[Vector]:
    basis = hh1_basis(alg)
    return [{basis.labels.index(label): QQ(1)} for label in labels]


# ─── Operations ─────────────────────────────────────────────────

def is_abelian(alg: ToupieAlgebra) -> tuple[bool, str]:
    if alg.a == 0:
        return True, "a=0"
    if alg.D <= 1:
        return True, "D<=1"
    return False, "a>0 and D>1"


def center(alg: ToupieAlgebra) -> list[str]:
    basis = hh1_basis(alg)
    if is_abelian(alg)[0]:
        return list(basis.labels)
    dim, consts = _structure(alg)
    # ad: x ↦ ([x, e_j])_j, rows indexed by (j, k)
    ad = RationalMatrix(dim * dim, dim)
    for (i, j), coords in consts.items():
        for k, c in coords.items():
            ad.add(j * dim + k, i, c)
    kernel = ad.nullspace()
    ys = _labels_of(alg, "y")
    if len(kernel) != len(ys) or not _inside(dim, kernel, _units(alg, ys)):
        raise ConstructionMismatch(f"adjoint kernel has dimension {len(kernel)}, C1'' gives {len(ys)}")
    return ys


def radical(alg: ToupieAlgebra) -> list[str]:
    basis = hh1_basis(alg)
    if is_abelian(alg)[0]:
        return list(basis.labels)
    labels = _labels_of(alg, "t") + _labels_of(alg, "z") + _labels_of(alg, "y")
    dim, consts = _structure(alg)
    ideal = _units(alg, labels)
    everything = _units(alg, list(basis.labels))
    brackets = [_bracket_vectors(consts, x, r) for x in everything for r in ideal]
    if not _inside(dim, ideal, brackets):
        raise ConstructionMismatch("t, z and y classes do not span an ideal")
    series = ideal
    for _ in range(dim + 1):
        if _span_rank(dim, series) == 0:
            break
        series = [_bracket_vectors(consts, x, y) for x in series for y in series]
    else:
        raise ConstructionMismatch("the derived series of the radical does not terminate")
    return labels


def sl_images(alg: ToupieAlgebra) -> dict[str, RationalMatrix]:
    """w_pq ↦ E_qp and x_j ↦ E_jj − E_11 in gl_a."""
    basis = hh1_basis(alg)
    out = {}
    for label, (family, idx) in zip(basis.labels, basis.tags):
        m = RationalMatrix(alg.a, alg.a)
        if family == "w":
            p, q_ = idx
            m.add(q_ - 1, p - 1, 1)
        elif family == "x":
            (j,) = idx
            m.add(j - 1, j - 1, 1)
            m.add(0, 0, -1)
        else:
            continue
        out[label] = m
    return out


def _matrix_label(m: RationalMatrix) -> str:
    terms = [(f"E{i + 1}{j + 1}" if m.nrows < 10 else f"E{i + 1}_{j + 1}", c)
             for i, row in sorted(m.rows.items()) for j, c in sorted(row.items())]
    return format_combination(terms)


def _check_sl(alg: ToupieAlgebra, images: dict[str, RationalMatrix]) -> None:
    table = bracket_table(alg)
    sl_labels = list(images)
    for left in sl_labels:
        for right in sl_labels:
            value = table.get(left, right)
            mapped = RationalMatrix(alg.a, alg.a)
            for k, c in value.coordinates.items():
                label = table.labels[k]
                if label not in images:
                    raise ConstructionMismatch(f"[{left}, {right}] leaves the sl part")
                for i, row in images[label].rows.items():
                    for j, v in row.items():
                        mapped.add(i, j, c * v)
            a, b = images[left], images[right]
            if mapped != (a @ b) - (b @ a):
                raise ConstructionMismatch(f"[{left}, {right}] does not match the matrix commutator")


def _check_solvable_part(alg: ToupieAlgebra, s1: list[str], l2: list[str]) -> None:
    dim, consts = _structure(alg)
    s1_v, l2_v = _units(alg, s1), _units(alg, l2)
    el = s1_v + l2_v
    everything = _units(alg, list(hh1_basis(alg).labels))
    checks = [
        ("[S1, S1] = 0", [], [_bracket_vectors(consts, x, y) for x in s1_v for y in s1_v]),
        ("[L2, L2] = 0", [], [_bracket_vectors(consts, x, y) for x in l2_v for y in l2_v]),
        ("[L, L] ⊆ L2", l2_v, [_bracket_vectors(consts, x, y) for x in el for y in el]),
        ("L is an ideal", el, [_bracket_vectors(consts, x, y) for x in everything for y in el]),
    ]
    for name, span, vectors in checks:
        if not _inside(dim, span, vectors):
            raise ConstructionMismatch(f"Levi decomposition check failed: {name}")


def is_semisimple(alg: ToupieAlgebra) -> bool:
    if is_abelian(alg)[0]:
        raise AbelianInput("HH^1(A) is abelian; the semisimplicity criterion needs a > 0 and D > 1")
    semisimple = alg.a == alg.D and alg.m == 0
    if semisimple != (not radical(alg)):
        raise ConstructionMismatch("semisimplicity criterion disagrees with the radical")
    return semisimple


def _angle(labels: list[str]) -> str:
    return "⟨" + ",".join(labels) + "⟩"


def levi_decomposition(alg: ToupieAlgebra) -> LieReport:
    abelian, reason = is_abelian(alg)
    if abelian:
        raise NotApplicable(f"HH^1(A) is abelian ({reason})")
    images = sl_images(alg)
    _check_sl(alg, images)
    ys, s1, l2 = _labels_of(alg, "y"), _labels_of(alg, "t"), _labels_of(alg, "z")
    _check_solvable_part(alg, s1, l2)

    text = f"sl_{alg.a}"
    solvable = [part for part in (s1, l2) if part]
    if len(solvable) == 2:
        text += f" ⋉ ({_angle(s1)} ⋉ {_angle(l2)})"
    elif solvable:
        text += f" ⋉ {_angle(solvable[0])}"
    if ys:
        text = f"{_angle(ys)} ⊕ {text}"

    return LieReport(
        abelian=False,
        reason=reason,
        center=center(alg),
        radical=radical(alg),
        center_part=ys,
        sl_part={label: _matrix_label(m) for label, m in images.items()},
        s1=s1,
        l2=l2,
        semisimple=is_semisimple(alg),
        decomposition=text,
    )


def lie_report(alg: ToupieAlgebra) -> LieReport:
    abelian, reason = is_abelian(alg)
    if not abelian:
        return levi_decomposition(alg)
    labels = list(hh1_basis(alg).labels)
    return LieReport(
        abelian=True,
        reason=reason,
        center=labels,
        radical=labels,
        decomposition=f"abelian of dimension {len(labels)}",
        notes=[ENVELOPING_NOTE],
    )


# ─── Modules HH^n ───────────────────────────────────────────────

def _module_generators(alg: ToupieAlgebra, n: int) -> list[str]:
    if n == 2:
        out = [f"rho{i + 1}" for i in range(alg.rank)]
        out += [
            f"sigma({c + 1},{s},{e})"
            for c, windows in enumerate(alg.windows)
            for s, e in windows
            if s == 0 and e == alg.lengths[c]
        ]
        return out
    return [w.label() for w in full_ambiguities(alg, n - 1)]


def _orbit_rank(alg: ToupieAlgebra, n: int, start: int) -> int:
    """Rank of the span of the HH¹-orbit of one class of HH^n."""
    target = hh_basis(alg, n)
    generators = [hh1_basis(alg).element(i) for i in range(len(hh1_basis(alg)))]
    actions = [action_matrix(alg, g, n) for g in generators]
    span: list[Vector] = [{start: QQ(1)}]
    frontier = list(span)
    while frontier:
        new = []
        for vec in frontier:
            for images in actions:
                out: Vector = {}
                for i, c in vec.items():
                    for k, v in images[i].coordinates.items():
                        out[k] = out.get(k, QQ(0)) + c * v
                out = {k: v for k, v in out.items() if v != 0}
                if out and not _inside(len(target), span, [out]):
                    span.append(out)
                    new.append(out)
        frontier = new
    return _span_rank(len(target), span)


def _check_weights(alg: ToupieAlgebra, n: int) -> None:
    target = hh_basis(alg, n)
    basis = hh1_basis(alg)
    for label, (family, _) in zip(basis.labels, basis.tags):
        if family != "x":
            continue
        images = action_matrix(alg, basis.element(basis.labels.index(label)), n)
        for i, image in enumerate(images):
            coords = image.coordinates
            if set(coords) - {i} or coords.get(i, QQ(0)) not in (QQ(-1), QQ(0), QQ(1)):
                raise ConstructionMismatch(f"{label} does not act diagonally on {target.labels[i]}")


def module_decomposition(alg: ToupieAlgebra, n: int) -> ModuleDecomposition:
    if alg.a == 0:
        raise NotApplicable("the HH^1-module decomposition of HH^n is stated for a > 0")
    if n < 2:
        raise NotApplicable("module decompositions cover degrees n >= 2")
    target = hh_basis(alg, n)
    components = []
    for name in _module_generators(alg, n):
        members = [
            i for i, tag in enumerate(target.tags)
            if tag.generator.name == name
        ]
        if not members:
            continue
        comp = ModuleComponent(
            generator=name,
            class_basis=[target.labels[i] for i in members],
            irreducible=len(members) == alg.a,
        )
        # the orbit of gen‖α^(1) spans the component
        first = next(i for i in members if target.tags[i].value == alg.full(0))
        if _orbit_rank(alg, n, first) != len(members):
            raise ConstructionMismatch(f"V_{name} is not generated by {target.labels[first]}")
        components.append(comp)

    if sum(len(c.class_basis) for c in components) != len(target):
        raise ConstructionMismatch(f"components do not add up to dim HH^{n} = {len(target)}")
    _check_weights(alg, n)

    notes = []
    if n >= 3 and components and alg.D != alg.a:
        notes.append(f"each generator contributes D - a = {alg.D - alg.a} trivial summands")
    if n == 2 and alg.D != alg.a and any(c.irreducible for c in components):
        notes.append("some V_rho is irreducible although D != a; no monomial relation runs from 0 to w")
    for note in notes:
        logger.warning("HH^%d: %s", n, note)

    standard = len(components)
    return ModuleDecomposition(
        degree=n,
        components=components,
        standard_multiplicity=standard,
        trivial_multiplicity=len(target) - alg.a * standard,
        notes=notes,
    )
