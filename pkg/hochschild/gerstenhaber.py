"""
Gerstenhaber structure of HH*(A) in terms of the minimal resolution.

Brackets of degree-one classes come from arrow substitution,
[α‖h, β‖b] = β‖b^{α‖h} − α‖h^{β‖b}, computed on cochain representatives and
projected back to the labeled HH¹ basis. Every entry of the bracket table is
also produced by the closed formulas for the families y, x, w, z, t and both
computations must agree.
"""

import logging
from dataclasses import dataclass

from sympy import QQ

from .algebra import Element, Path, ToupieAlgebra, memoized
from .cohomology import (
    ARROW,
    CohomologyClass,
    LabeledBasis,
    cochain_space,
    differential_matrix,
    hh1_basis,
    hh_basis,
    w_first_arrow,
)
from .errors import DegreeMismatch, DegreeUnsupported, EndpointMismatch, NotACocycle, TableMismatch
from .linalg import RationalMatrix, Vector, add_into

logger = logging.getLogger(__name__)


def substitute(alg: ToupieAlgebra, path: Path, arrow: Path, value: Element) -> Element:
    """path^{α‖h}: replace the occurrence of ``arrow`` in ``path`` by ``value``, reduced in A."""
    if arrow.length != 1:
        raise EndpointMismatch(f"{alg.path_label(arrow)} is not an arrow")
    for p in value:
        if alg.source(p) != alg.source(arrow) or alg.target(p) != alg.target(arrow):
            raise EndpointMismatch(
                f"{alg.path_label(p)} does not share the endpoints of {alg.path_label(arrow)}",
            )
    if path.is_trivial or path.branch != arrow.branch or not (path.start <= arrow.start < path.end):
        return Element()
    left = Element.of(alg.run(path.branch, path.start, arrow.start))
    right = Element.of(alg.run(path.branch, arrow.end, path.end))
    return alg.multiply(alg.multiply(left, value), right)


def _arrow_of(b) -> Path:
    branch, start = b.generator.key
    return Path(branch, start, 1)


def bracket_cochains(alg: ToupieAlgebra, f: Vector, g: Vector) -> Vector:
    """Bracket of two degree-one cochains, bilinear in both arguments."""
    space = cochain_space(alg, 1)
    out: Vector = {}
    for i, cf in f.items():
        bf = space.basis[i]
        alpha, h = _arrow_of(bf), Element.of(bf.value)
        for j, cg in g.items():
            bg = space.basis[j]
            beta, b = _arrow_of(bg), Element.of(bg.value)
            add_into(out, space.vector(bg.generator, substitute(alg, bg.value, alpha, h)), cf * cg)
            add_into(out, space.vector(bf.generator, substitute(alg, bf.value, beta, b)), -cf * cg)
    return out


def _check_cocycles(alg: ToupieAlgebra, vectors: list[Vector]) -> None:
    if not vectors:
        return
    d1 = differential_matrix(alg, 1)
    product = d1 @ RationalMatrix.from_columns(cochain_space(alg, 1).dim, vectors)
    if not product.is_zero():
        raise NotACocycle("a degree-one bracket left Ker D1")


def bracket_deg1(alg: ToupieAlgebra, f: CohomologyClass, g: CohomologyClass) -> CohomologyClass:
    if f.degree != 1 or g.degree != 1:
        raise DegreeMismatch(f"bracket_deg1 needs two degree-one classes, got {f.degree} and {g.degree}")
    basis = hh1_basis(alg)
    result = bracket_cochains(alg, basis.representative(f), basis.representative(g))
    _check_cocycles(alg, [result])
    return basis.project(result)


# ─── Closed forms for the labeled HH¹ basis ─────────────────────

def _delta(i: int, j: int) -> int:
    return 1 if i == j else 0


def _closed(alg: ToupieAlgebra, t1: tuple, t2: tuple) -> list[tuple[int, tuple]] | None:
    """Upper-triangular closed forms; None when the pair is given by antisymmetry or is 0."""
    (f1, i1), (f2, i2) = t1, t2
    if f1 == "x" and f2 == "w":
        (j,), (p2, q2) = i1, i2
        coeff = _delta(j, q2) - _delta(j, p2) - _delta(q2, 1) + _delta(1, p2)
        return [(coeff, ("w", (p2, q2)))]
    if f1 == "x" and f2 == "z":
        (j,), (u2, s2) = i1, i2
        return [(-_delta(j, u2) + _delta(u2, 1), ("z", (u2, s2)))]
    if f1 == "t" and f2 == "z":
        (k,), (u2, s2) = i1, i2
        inside = alg.q_rho.component_of(s2 - 1) == k - 1
        return [(1 if inside else 0, ("z", (u2, s2)))]
    if f1 == "w" and f2 == "z":
        (p, q_), (u2, s2) = i1, i2
        return [(-_delta(q_, u2), ("z", (p, s2)))]
    if f1 == "w" and f2 == "w":
        (p, q_), (p2, q2) = i1, i2
        if q_ == p2 and p == q2:
            # x_{p'} - x_p with x_1 = 0
            return [(1, ("x", (p2,))), (-1, ("x", (p,)))]
        return [(_delta(p, q2), ("w", (p2, q_))), (-_delta(q_, p2), ("w", (p, q2)))]
    return None


def closed_form(alg: ToupieAlgebra, t1: tuple, t2: tuple) -> CohomologyClass:
    """Table value of [t1, t2] for two tags of the labeled HH¹ basis."""
    basis = hh1_basis(alg)
    terms = _closed(alg, t1, t2)
    sign = 1
    if terms is None:
        terms, sign = _closed(alg, t2, t1), -1
    coords: Vector = {}
    for coeff, tag in terms or []:
        if coeff == 0 or tag == ("x", (1,)):
            continue
        add_into(coords, {basis.tags.index(tag): QQ(coeff * sign)})
    return CohomologyClass(1, coords, basis.labels)


@dataclass(frozen=True)
class BracketTable:
    labels: tuple[str, ...]
    entries: dict[tuple[int, int], CohomologyClass]

    def get(self, left: str, right: str) -> CohomologyClass:
        return self.entries[(self.labels.index(left), self.labels.index(right))]

    def nonzero(self) -> list[tuple[str, str, str]]:
        return [
            (self.labels[i], self.labels[j], cls.pretty())
            for (i, j), cls in sorted(self.entries.items())
            if not cls.is_zero()
        ]


@memoized
def bracket_table(alg: ToupieAlgebra) -> BracketTable:
    basis = hh1_basis(alg)
    pairs = [(i, j) for i in range(len(basis)) for j in range(len(basis))]
    results = [bracket_cochains(alg, basis.vectors[i], basis.vectors[j]) for i, j in pairs]
    _check_cocycles(alg, [r for r in results if r])
    projected = basis.project_many(results) if results else []
    entries = {}
    for (i, j), cls in zip(pairs, projected):
        expected = closed_form(alg, basis.tags[i], basis.tags[j])
        if cls != expected:
            raise TableMismatch(
                f"[{basis.labels[i]}, {basis.labels[j]}] = {cls.pretty()} by substitution, "
                f"{expected.pretty()} by the closed formula",
            )
        entries[(i, j)] = cls
    logger.info("bracket table: %d pairs, %d nonzero", len(entries), sum(not c.is_zero() for c in entries.values()))
    return BracketTable(basis.labels, entries)


# ─── Action of HH¹ on HH^n ──────────────────────────────────────

def action_cochains(alg: ToupieAlgebra, f: Vector, v: Vector, n: int) -> Vector:
    """[α‖b, g‖c] = δ(α = ←c)·g‖c^{α‖b} − δ(α = ←W_g)·g‖c, extended bilinearly."""
    one = cochain_space(alg, 1)
    space = cochain_space(alg, n)
    out: Vector = {}
    for i, cf in f.items():
        bf = one.basis[i]
        if bf.generator.kind != ARROW:
            continue
        alpha, b = _arrow_of(bf), Element.of(bf.value)
        for j, cv in v.items():
            target = space.basis[j]
            gen, c = target.generator, target.value
            if alg.first_arrow(c) == alpha:
                add_into(out, space.vector(gen, substitute(alg, c, alpha, b)), cf * cv)
            if w_first_arrow(alg, gen) == alpha:
                add_into(out, {j: QQ(1)}, -cf * cv)
    return out


def bracket_deg1_degn(alg: ToupieAlgebra, f: CohomologyClass, v: CohomologyClass) -> CohomologyClass:
    if f.degree != 1 or v.degree < 2:
        raise DegreeMismatch(f"the action needs degrees (1, n >= 2), got ({f.degree}, {v.degree})")
    target: LabeledBasis = hh_basis(alg, v.degree)
    result = action_cochains(alg, hh1_basis(alg).representative(f), target.representative(v), v.degree)
    return target.project(result)


def action_matrix(alg: ToupieAlgebra, f: CohomologyClass, n: int) -> list[CohomologyClass]:
    """Images [f, v] of every labeled class v of HH^n."""
    target = hh_basis(alg, n)
    rep = hh1_basis(alg).representative(f)
    vectors = [action_cochains(alg, rep, target.vectors[i], n) for i in range(len(target))]
    return target.project_many(vectors) if vectors else []


# ─── Cup product and higher brackets ────────────────────────────

def cup(alg: ToupieAlgebra, f: CohomologyClass, g: CohomologyClass) -> CohomologyClass:
    """Cup product; zero between positive degrees, HH⁰ = k acts by scalars."""
    if f.degree == 0:
        return g.scaled(f.coordinates.get(0, QQ(0)))
    if g.degree == 0:
        return f.scaled(g.coordinates.get(0, QQ(0)))
    return hh_basis(alg, f.degree + g.degree).zero()


def bracket_high(alg: ToupieAlgebra, f: CohomologyClass, g: CohomologyClass) -> CohomologyClass:
    if f.degree < 2 or g.degree < 2:
        raise DegreeMismatch(f"bracket_high needs degrees > 1, got ({f.degree}, {g.degree})")
    return hh_basis(alg, f.degree + g.degree - 1).zero()


def bracket(alg: ToupieAlgebra, f: CohomologyClass, g: CohomologyClass) -> CohomologyClass:
    """Gerstenhaber bracket of two classes of any degrees."""
    m, n = f.degree, g.degree
    if m + n == 0:
        raise DegreeUnsupported("the bracket of two degree-zero classes has degree -1")
    if m == 0 or n == 0:
        # HH⁰ is spanned by the unit, which normalized cochains ignore
        return hh_basis(alg, m + n - 1).zero()
    if m == 1 and n == 1:
        return bracket_deg1(alg, f, g)
    if m == 1:
        return bracket_deg1_degn(alg, f, g)
    if n == 1:
        return -bracket_deg1_degn(alg, g, f)
    return bracket_high(alg, f, g)
