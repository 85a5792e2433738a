"""
The cochain complex Hom(kQ0, A) → Hom(kQ1, A) → Hom(kR, A) → Hom(kA2, A) → ...
obtained from the minimal resolution, and explicit labeled bases of HH^i.

Cochains are sparse vectors over the ordered basis of a ``CochainSpace``.
Every labeled basis is built from the explicit constructions (C1..C4 for HH¹,
B1 / B2'' for HH²) and then audited against exact ranks.
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property

from sympy import QQ

from .algebra import (
    SINK,
    SOURCE,
    Element,
    Path,
    ToupieAlgebra,
    Vertex,
    format_combination,
    memoized,
)
from .ambiguity import n_ambiguities
from .errors import ConstructionMismatch, UnknownLabel
from .linalg import Coeff, Projector, RationalMatrix, Vector, add_into

logger = logging.getLogger(__name__)

VERTEX = "vertex"
ARROW = "arrow"
RHO = "rho"
SIGMA = "sigma"
AMB = "amb"


@dataclass(frozen=True)
class Generator:
    """A basis element of E, kQ1, kR or kA_n: the left-hand side of w‖g."""

    kind: str
    key: tuple
    source: Vertex
    target: Vertex
    name: str = field(compare=False)


@dataclass(frozen=True)
class CochainBasisElement:
    generator: Generator
    value: Path

    def label(self, alg: ToupieAlgebra) -> str:
        return f"{self.generator.name}‖{alg.path_label(self.value)}"


@dataclass(frozen=True, eq=False)
class CochainSpace:
    degree: int
    generators: tuple[Generator, ...]
    basis: tuple[CochainBasisElement, ...]

    @cached_property
    def index(self) -> dict[CochainBasisElement, int]:
        return {b: i for i, b in enumerate(self.basis)}

    @property
    def dim(self) -> int:
        return len(self.basis)

    def vector(self, generator: Generator, value: Element) -> Vector:
        """The cochain generator‖value for a homogeneous element parallel to the generator."""
        out: Vector = {}
        for path, coeff in value.items():
            add_into(out, {self.index[CochainBasisElement(generator, path)]: coeff})
        return out

    def unit(self, generator: Generator, value: Path) -> Vector:
        return {self.index[CochainBasisElement(generator, value)]: QQ(1)}


@dataclass(frozen=True)
class CohomologyClass:
    degree: int
    coordinates: dict[int, Coeff]
    labels: tuple[str, ...] = field(compare=False)

    def is_zero(self) -> bool:
        return not self.coordinates

    def pretty(self) -> str:
        return format_combination((self.labels[i], c) for i, c in sorted(self.coordinates.items()))

    def __add__(self, other: "CohomologyClass") -> "CohomologyClass":
        coords = dict(self.coordinates)
        add_into(coords, other.coordinates)
        return CohomologyClass(self.degree, coords, self.labels)

    def scaled(self, factor) -> "CohomologyClass":
        coords: Vector = {}
        add_into(coords, self.coordinates, factor)
        return CohomologyClass(self.degree, coords, self.labels)

    def __neg__(self) -> "CohomologyClass":
        return self.scaled(-1)

    def __sub__(self, other: "CohomologyClass") -> "CohomologyClass":
        return self + (-other)


@dataclass(frozen=True, eq=False)
class LabeledBasis:
    """
    Classes spanning HH^degree: their labels, cochain representatives and tags.

    Tags describe each class structurally: ``(family, indices)`` in degree 1,
    the single ``CochainBasisElement`` in degrees >= 2.
    """

    degree: int
    space: CochainSpace
    labels: tuple[str, ...]
    vectors: tuple[Vector, ...]
    tags: tuple
    image: tuple[Vector, ...] = ()

    @cached_property
    def projector(self) -> Projector:
        return Projector(self.space.dim, list(self.vectors), list(self.image))

    def __len__(self) -> int:
        return len(self.labels)

    def project(self, vector: Vector) -> CohomologyClass:
        return CohomologyClass(self.degree, self.projector.project(vector), self.labels)

    def project_many(self, vectors: list[Vector]) -> list[CohomologyClass]:
        return [
            CohomologyClass(self.degree, coords, self.labels)
            for coords in self.projector.project_many(vectors)
        ]

    def element(self, i: int, coeff=1) -> CohomologyClass:
        return CohomologyClass(self.degree, {i: QQ.convert(coeff)}, self.labels)

    def zero(self) -> CohomologyClass:
        return CohomologyClass(self.degree, {}, self.labels)

    def index_of(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise UnknownLabel(f"no class {label!r} in HH^{self.degree}", location=label) from None

    def representative(self, cls: CohomologyClass) -> Vector:
        out: Vector = {}
        for i, c in cls.coordinates.items():
            add_into(out, self.vectors[i], c)
        return out


# ─── Generators and spaces ──────────────────────────────────────

def relation_terms(alg: ToupieAlgebra, gen: Generator) -> list[tuple[Coeff, Path]]:
    """A degree-two generator as a combination of paths of kQ."""
    if gen.kind == RHO:
        (i,) = gen.key
        return [(c, alg.full(j)) for j, c in sorted(alg.rows[i].items())]
    c, s, e = gen.key
    return [(QQ(1), alg.run(c, s, e))]


def w_first_arrow(alg: ToupieAlgebra, gen: Generator) -> Path:
    """First arrow of W_gen: the pivot branch for a linear relation, the path itself otherwise."""
    if gen.kind == RHO:
        (i,) = gen.key
        return Path(alg.pivots[i], 0, 1)
    c, s, _ = gen.key
    return Path(c, s, 1)


@memoized
def generators(alg: ToupieAlgebra, degree: int) -> tuple[Generator, ...]:
    if degree == 0:
        return tuple(Generator(VERTEX, (v.branch, v.offset), v, v, v.label()) for v in alg.vertices)
    if degree == 1:
        return tuple(
            Generator(ARROW, (p.branch, p.start), alg.source(p), alg.target(p), alg.path_label(p))
            for p in alg.arrows
        )
    if degree == 2:
        rhos = [Generator(RHO, (i,), SOURCE, SINK, f"rho{i + 1}") for i in range(alg.rank)]
        sigmas = [
            Generator(SIGMA, (c, s, e), alg.vertex_at(c, s), alg.vertex_at(c, e), f"sigma({c + 1},{s},{e})")
            for c, windows in enumerate(alg.windows)
            for s, e in windows
        ]
        return tuple(rhos + sigmas)
    return tuple(
        Generator(AMB, w.key, alg.vertex_at(w.branch, w.start), alg.vertex_at(w.branch, w.end), w.label())
        for w in n_ambiguities(alg, degree - 1)
    )


@memoized
def cochain_space(alg: ToupieAlgebra, degree: int) -> CochainSpace:
    gens = generators(alg, degree)
    basis = tuple(
        CochainBasisElement(g, value)
        for g in gens
        for value in alg.paths_between(g.source, g.target)
    )
    logger.debug("C^%d has dimension %d", degree, len(basis))
    return CochainSpace(degree, gens, basis)


# ─── Differentials ──────────────────────────────────────────────

def substitute_in_relation(alg: ToupieAlgebra, gen: Generator, arrow: Path, value: Path) -> Element:
    """Replace the occurrences of ``arrow`` in the relation ``gen`` by ``value`` and reduce."""
    out = Element()
    for coeff, path in relation_terms(alg, gen):
        if path.branch != arrow.branch or not (path.start <= arrow.start < path.end):
            continue
        left = Element.of(alg.run(path.branch, path.start, arrow.start))
        right = Element.of(alg.run(path.branch, arrow.end, path.end))
        out.add(alg.multiply(alg.multiply(left, Element.of(value)), right), coeff)
    return out


@memoized
def differential_matrix(alg: ToupieAlgebra, degree: int) -> RationalMatrix:
    """Matrix of D_degree from C^degree to C^(degree+1); zero from degree 2 on."""
    src = cochain_space(alg, degree)
    dst = cochain_space(alg, degree + 1)
    m = RationalMatrix(dst.dim, src.dim)
    if degree == 0:
        arrows = {g.key: g for g in dst.generators}
        for j, b in enumerate(src.basis):
            v = b.generator.source
            for p in alg.arrows:
                gen = arrows[(p.branch, p.start)]
                sign = (1 if alg.target(p) == v else 0) - (1 if alg.source(p) == v else 0)
                if sign != 0:
                    m.add(dst.index[CochainBasisElement(gen, p)], j, sign)
    elif degree == 1:
        for j, b in enumerate(src.basis):
            arrow = Path(b.generator.key[0], b.generator.key[1], 1)
            for gen in dst.generators:
                image = substitute_in_relation(alg, gen, arrow, b.value)
                for i, c in dst.vector(gen, image).items():
                    m.add(i, j, c)
    logger.debug("D%d: %r", degree, m)
    return m


@memoized
def differential_rank(alg: ToupieAlgebra, degree: int) -> int:
    if degree < 0 or degree >= 2:
        return 0
    return differential_matrix(alg, degree).rank()


def hh_dimension(alg: ToupieAlgebra, i: int) -> int:
    if i >= 3:
        return len(cochain_space(alg, i).basis)
    return cochain_space(alg, i).dim - differential_rank(alg, i) - differential_rank(alg, i - 1)


def hh_dimensions(alg: ToupieAlgebra, max_degree: int) -> list[int]:
    dims = [hh_dimension(alg, i) for i in range(max_degree + 1)]
    logger.info("HH dimensions up to degree %d: %s", max_degree, dims)
    return dims


# ─── Labeled bases ──────────────────────────────────────────────

def _index_label(prefix: str, *indices: int) -> str:
    if all(i < 10 for i in indices):
        return prefix + "".join(str(i) for i in indices)
    return prefix + "_".join(str(i) for i in indices)


def _arrow_gen(alg: ToupieAlgebra, arrow: Path) -> Generator:
    return next(g for g in generators(alg, 1) if g.key == (arrow.branch, arrow.start))


def _loop(alg: ToupieAlgebra, space: CochainSpace, branch: int) -> Vector:
    """α^i_0‖α^i_0 for the first arrow of a branch."""
    arrow = Path(branch, 0, 1)
    return space.unit(_arrow_gen(alg, arrow), arrow)


@memoized
def hh0_basis(alg: ToupieAlgebra) -> LabeledBasis:
    space = cochain_space(alg, 0)
    one = {i: QQ(1) for i in range(space.dim)}
    return LabeledBasis(0, space, ("1",), (one,), (("one", ()),))


Entry = tuple[str, Vector, tuple]


@dataclass(frozen=True)
class KernelConstruction:
    """
    The basis U = C1 ∪ C2 ∪ C3 ∪ C4 of Ker D1 and its replacement Û.

    C1 holds α‖α for the arrows of monomial branches, C2 is Z‖₀B_ω, C3 holds
    α^i_j‖α^i_j - α^i_0‖α^i_0 on the other long branches and C4 the sums of
    first loops over the components of Q_ρ. Û keeps C1'' and C4, rewrites C1
    into C1' and C2 against s, and K = {s} ∪ C1' ∪ C3 spans Im D0.
    ``classes`` are the labeled elements of Û - K.
    """

    c1: tuple[Vector, ...]
    c1_prime: tuple[Vector, ...]
    c1_second: tuple[Vector, ...]
    c2: tuple[Vector, ...]
    c3: tuple[Vector, ...]
    c4: tuple[Vector, ...]
    s: Vector
    u_hat: tuple[Vector, ...]
    classes: tuple[Entry, ...]

    @property
    def u(self) -> tuple[Vector, ...]:
        return self.c1 + self.c2 + self.c3 + self.c4

    @property
    def k(self) -> tuple[Vector, ...]:
        return (self.s,) + self.c1_prime + self.c3


def _arrow_loop(alg: ToupieAlgebra, space: CochainSpace, arrow: Path) -> Vector:
    return space.unit(_arrow_gen(alg, arrow), arrow)


def _minus_first(alg: ToupieAlgebra, space: CochainSpace, branch: int, j: int) -> Vector:
    vec = _arrow_loop(alg, space, Path(branch, j, 1))
    add_into(vec, _loop(alg, space, branch), -1)
    return vec


@memoized
def kernel_construction(alg: ToupieAlgebra) -> KernelConstruction:
    space = cochain_space(alg, 1)
    monomial = alg.branches_of("m")
    long_free = alg.branches_of("l") + alg.branches_of("n")

    c1 = tuple(
        _arrow_loop(alg, space, Path(c, j, 1)) for c in monomial for j in range(alg.lengths[c])
    )
    c1_prime = tuple(_minus_first(alg, space, c, j) for c in monomial for j in range(1, alg.lengths[c]))
    y_entries = [(_index_label("y", c + 1), _loop(alg, space, c), ("y", (c + 1,))) for c in monomial]
    c3 = tuple(_minus_first(alg, space, c, j) for c in long_free for j in range(1, alg.lengths[c]))
    t_entries = []
    for k, comp in enumerate(alg.q_rho.components, start=1):
        vec: Vector = {}
        for c in comp:
            add_into(vec, _loop(alg, space, c))
        t_entries.append((_index_label("t", k), vec, ("t", (k,))))
    s: Vector = {}
    for c in range(alg.num_branches):
        add_into(s, _loop(alg, space, c))

    def z(p: int, value: Path) -> Vector:
        return space.unit(_arrow_gen(alg, Path(p - 1, 0, 1)), value)

    c2 = tuple(z(p, value) for p in range(1, alg.a + 1) for value in alg.full_basis)
    if alg.a > 0:
        c2_hat = []
        entries = list(y_entries)
        for p in range(1, alg.a + 1):
            for q_ in range(1, alg.a + 1):
                if p != q_:
                    vec = z(p, alg.full(q_ - 1))
                    c2_hat.append(vec)
                    entries.append((_index_label("w", p, q_), vec, ("w", (p, q_))))
        for j in range(2, alg.a + 1):
            vec = z(j, alg.full(j - 1))
            add_into(vec, z(1, alg.full(0)), -1)
            c2_hat.append(vec)
            entries.append((_index_label("x", j), vec, ("x", (j,))))
        for value in alg.full_basis:
            if value.branch < alg.a:
                continue
            for u in range(1, alg.a + 1):
                vec = z(u, value)
                c2_hat.append(vec)
                entries.append((_index_label("z", u, value.branch + 1), vec, ("z", (u, value.branch + 1))))
        entries += t_entries
        u_hat = c1_prime + tuple(e[1] for e in y_entries) + tuple(c2_hat) + (s,) + c3 + tuple(e[1] for e in t_entries)
    else:
        # the element of C1'' ∪ C4 holding the first loop of the last branch gives way to s
        last = alg.num_branches - 1
        if last in monomial:
            dropped = y_entries[monomial.index(last)][0]
        else:
            dropped = t_entries[alg.q_rho.component_of(last)][0]
        entries = [e for e in y_entries + t_entries if e[0] != dropped]
        logger.debug("a = 0: %s absorbed into the coboundary s", dropped)
        u_hat = c1_prime + (s,) + c3 + tuple(e[1] for e in entries)

    return KernelConstruction(
        c1=c1,
        c1_prime=c1_prime,
        c1_second=tuple(e[1] for e in y_entries),
        c2=c2,
        c3=c3,
        c4=tuple(e[1] for e in t_entries),
        s=s,
        u_hat=u_hat,
        classes=tuple(entries),
    )


def _rank_of(dim: int, vectors) -> int:
    vectors = list(vectors)
    return RationalMatrix.from_columns(dim, vectors).rank() if vectors else 0


def _audit_kernel(alg: ToupieAlgebra, kc: KernelConstruction) -> None:
    dim = cochain_space(alg, 1).dim
    num_vertices = len(alg.vertices)
    expected_u = alg.r + alg.m + alg.D * alg.a + num_vertices - 2
    kernel = kernel_dimension(alg, 1)
    if len(kc.u) != expected_u or kernel != expected_u or _rank_of(dim, kc.u) != expected_u:
        raise ConstructionMismatch(
            f"U has {len(kc.u)} elements of rank {_rank_of(dim, kc.u)}, "
            f"dim Ker D1 = {kernel}, r + m + Da + #Q0 - 2 = {expected_u}"
        )
    if not (differential_matrix(alg, 1) @ RationalMatrix.from_columns(dim, list(kc.u))).is_zero():
        raise ConstructionMismatch("an element of U is not in Ker D1")
    joint = _rank_of(dim, kc.u + kc.u_hat)
    if len(kc.u_hat) != len(kc.u) or joint != expected_u or _rank_of(dim, kc.u_hat) != expected_u:
        raise ConstructionMismatch("U and Û do not span the same space")
    rank_d0 = differential_rank(alg, 0)
    if len(kc.k) != num_vertices - 1 or rank_d0 != len(kc.k) or _rank_of(dim, kc.k) != len(kc.k):
        raise ConstructionMismatch(
            f"K has {len(kc.k)} elements of rank {_rank_of(dim, kc.k)}, rank D0 = {rank_d0}, #Q0 - 1 = {num_vertices - 1}"
        )
    if None in differential_matrix(alg, 0).solve(kc.k):
        raise ConstructionMismatch("an element of K is not in Im D0")


@memoized
def hh1_basis(alg: ToupieAlgebra) -> LabeledBasis:
    space = cochain_space(alg, 1)
    kc = kernel_construction(alg)
    _audit_kernel(alg, kc)
    basis = LabeledBasis(
        1, space,
        tuple(e[0] for e in kc.classes),
        tuple(e[1] for e in kc.classes),
        tuple(e[2] for e in kc.classes),
        kc.k,
    )
    _audit(alg, basis, expected=alg.r + alg.m + alg.D * alg.a - 1)
    return basis


@dataclass(frozen=True)
class ImageBasis:
    """B1 and B2'' with their pivot columns in C^2."""

    b1: tuple[Vector, ...]
    b1_pivots: tuple[int, ...]
    b2: tuple[Vector, ...]
    b2_pivots: tuple[int, ...]

    @property
    def vectors(self) -> tuple[Vector, ...]:
        return self.b1 + self.b2


@memoized
def image_d1_basis(alg: ToupieAlgebra) -> ImageBasis:
    space = cochain_space(alg, 2)
    rhos = [g for g in space.generators if g.kind == RHO]

    # B1: ρ_i‖f_ρi for every relation that is not the last one of its component
    last_rows = {alg.last_relation(comp) for comp in alg.q_rho.components}
    b1, b1_pivots = [], []
    for i, gen in enumerate(rhos):
        if i in last_rows:
            continue
        tail = alg.pivot_tail(i)
        b1.append(space.vector(gen, tail))
        b1_pivots.append(space.index[CochainBasisElement(gen, min(tail))])

    # B2: D1(α^h_0‖α^h_0) for h in X, with B1 pivot columns cleared
    b2_prime = []
    for h in alg.x_branches:
        vec: Vector = {}
        for i, gen in enumerate(rhos):
            b = alg.rows[i].get(h)
            if b is not None and b != 0:
                add_into(vec, space.unit(gen, alg.full(h)), b)
        for piv, row in zip(b1_pivots, b1):
            c = vec.get(piv)
            if c is not None and c != 0:
                add_into(vec, row, -c / row[piv])
        b2_prime.append(vec)

    # B2'': echelon form for the order ≺ (relation by pivot branch, then value branch)
    order = sorted(range(space.dim), key=lambda j: _prec_key(alg, space.basis[j]))
    position = {j: pos for pos, j in enumerate(order)}
    permuted = [{position[j]: c for j, c in v.items()} for v in b2_prime]
    reduced, pivots = RationalMatrix.from_rows(space.dim, permuted).rref() if permuted else ([], ())
    b2 = [{order[p]: c for p, c in row.items()} for row in reduced]
    b2_pivots = [order[p] for p in pivots]

    result = ImageBasis(tuple(b1), tuple(b1_pivots), tuple(b2), tuple(b2_pivots))
    expected = alg.l + alg.n - alg.r
    if len(result.vectors) != expected or differential_rank(alg, 1) != expected:
        raise ConstructionMismatch(
            f"B1 ∪ B2'' has {len(result.vectors)} elements, rank D1 = {differential_rank(alg, 1)}, "
            f"l + n - r = {expected}"
        )
    if result.vectors and None in differential_matrix(alg, 1).solve(result.vectors):
        raise ConstructionMismatch("an element of B1 ∪ B2'' is not in Im D1")
    return result


def _prec_key(alg: ToupieAlgebra, b: CochainBasisElement) -> tuple:
    gen = b.generator
    if gen.kind == RHO:
        return (0, alg.pivots[gen.key[0]], b.value.branch)
    return (1, gen.key, b.value.branch)


@memoized
def hh2_basis(alg: ToupieAlgebra) -> LabeledBasis:
    space = cochain_space(alg, 2)
    image = image_d1_basis(alg)
    taken = set(image.b1_pivots) | set(image.b2_pivots)
    survivors = [j for j in range(space.dim) if j not in taken]
    basis = LabeledBasis(
        2, space,
        tuple(space.basis[j].label(alg) for j in survivors),
        tuple({j: QQ(1)} for j in survivors),
        tuple(space.basis[j] for j in survivors),
        image.vectors,
    )
    _audit(alg, basis, expected=hh_dimension(alg, 2))
    return basis


@memoized
def hhi_basis(alg: ToupieAlgebra, i: int) -> LabeledBasis:
    if i < 3:
        raise ValueError("hhi_basis covers degrees >= 3")
    space = cochain_space(alg, i)
    return LabeledBasis(
        i, space,
        tuple(b.label(alg) for b in space.basis),
        tuple({j: QQ(1)} for j in range(space.dim)),
        space.basis,
    )


def hh_basis(alg: ToupieAlgebra, i: int) -> LabeledBasis:
    if i == 0:
        return hh0_basis(alg)
    if i == 1:
        return hh1_basis(alg)
    if i == 2:
        return hh2_basis(alg)
    return hhi_basis(alg, i)


def _audit(alg: ToupieAlgebra, basis: LabeledBasis, expected: int) -> None:
    if len(basis) != expected or not basis.projector.is_independent():
        raise ConstructionMismatch(
            f"HH^{basis.degree} construction gives {len(basis)} classes "
            f"(independent: {basis.projector.is_independent()}), expected {expected}"
        )
    if hh_dimension(alg, basis.degree) != expected:
        raise ConstructionMismatch(
            f"dim HH^{basis.degree} = {hh_dimension(alg, basis.degree)} by ranks, formula gives {expected}"
        )


def kernel_dimension(alg: ToupieAlgebra, degree: int) -> int:
    return cochain_space(alg, degree).dim - differential_rank(alg, degree)
