"""
Toupie algebras A = kQ/I.

A toupie quiver has one source 0, one sink ω and a family of branches, each
branch being a path 0 → ω whose inner vertices are private to it. The
algebra is described by the branch lengths, monomial relations (windows on a
single branch) and linear relations between full branches.

Branches are numbered from 1 in input order inside ``QuiverSpec``. After
``validate_and_build`` everything is indexed by the canonical position
(0-based) of a branch: arrows 0 → ω first, then relation-free branches, then
branches with monomial relations, then branches in linear relations.
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property, wraps
from typing import Callable, Iterable, TypeVar

from sympy import QQ

from .errors import (
    BadBranchLength,
    ConstructionMismatch,
    EmptyQuiver,
    InvalidAlgebra,
    MixedBranchClass,
    NonMinimalRelations,
    RelationOnArrow,
    SingleBranchRelation,
    UnknownBranch,
    WindowOutOfRange,
    ZeroRow,
)
from .linalg import Coeff, q, rref_rows
from .unionfind import UnionFind

logger = logging.getLogger(__name__)

F = TypeVar("F", bound=Callable)


def memoized(func: F) -> F:
    """Cache ``func(alg, *args)`` in ``alg.memo``, so the cache lives as long as the algebra."""
    name = f"{func.__module__}.{func.__qualname__}"

    @wraps(func)
    def wrapper(alg, *args, **kwargs):
        table = alg.memo.setdefault(name, {})
        key = (args, tuple(sorted(kwargs.items()))) if kwargs else args
        try:
            return table[key]
        except KeyError:
            pass
        value = table[key] = func(alg, *args, **kwargs)
        return value

    return wrapper  # type: ignore[return-value]


Z_ARROW = "Z"
RELATION_FREE = "l"
MONOMIAL = "m"
NON_MONOMIAL = "n"
CLASS_ORDER = (Z_ARROW, RELATION_FREE, MONOMIAL, NON_MONOMIAL)


# ─── Input description ──────────────────────────────────────────

@dataclass(frozen=True)
class MonomialRelation:
    branch: int
    start: int
    length: int

    @property
    def end(self) -> int:
        return self.start + self.length


@dataclass(frozen=True)
class QuiverSpec:
    branch_lengths: tuple[int, ...]
    monomial_relations: tuple[MonomialRelation, ...] = ()
    linear_relations: tuple[dict[int, Coeff], ...] = ()

    @classmethod
    def build(
        cls,
        branch_lengths: Iterable[int],
        monomial: Iterable[tuple[int, int, int]] = (),
        linear: Iterable[dict[int, object]] = (),
    ) -> "QuiverSpec":
        """Convenience constructor: monomial triples are (branch, start, length)."""
        return cls(
            branch_lengths=tuple(branch_lengths),
            monomial_relations=tuple(MonomialRelation(*t) for t in monomial),
            linear_relations=tuple({int(b): q(c) for b, c in row.items()} for row in linear),
        )


def check_spec(spec: QuiverSpec) -> list[InvalidAlgebra]:
    """All structural violations of ``spec``, in input order."""
    problems: list[InvalidAlgebra] = []
    lengths = spec.branch_lengths
    if not lengths:
        return [EmptyQuiver("the quiver has no branches", location="branches")]

    for i, length in enumerate(lengths, start=1):
        if not isinstance(length, int) or length < 1:
            problems.append(BadBranchLength(f"branch {i} has length {length!r}", location=f"branches[{i}]"))

    def known(b: int) -> bool:
        return 1 <= b <= len(lengths) and isinstance(lengths[b - 1], int) and lengths[b - 1] >= 1

    monomial_branches = set()
    windows: dict[int, list[tuple[int, int, int]]] = {}
    for idx, rel in enumerate(spec.monomial_relations):
        where = f"monomial_relations[{idx}]"
        if not known(rel.branch):
            problems.append(UnknownBranch(f"no branch {rel.branch}", location=where))
            continue
        monomial_branches.add(rel.branch)
        length = lengths[rel.branch - 1]
        if length == 1:
            problems.append(RelationOnArrow(f"branch {rel.branch} is a single arrow", location=where))
            continue
        if rel.length < 2 or rel.start < 0 or rel.end > length:
            problems.append(WindowOutOfRange(
                f"window start={rel.start} length={rel.length} does not fit branch {rel.branch} "
                f"of length {length} (relations need length >= 2)",
                location=where,
            ))
            continue
        windows.setdefault(rel.branch, []).append((rel.start, rel.end, idx))

    for branch, items in windows.items():
        for s1, e1, i1 in items:
            for s2, e2, i2 in items:
                if i1 < i2 and ((s1 <= s2 and e2 <= e1) or (s2 <= s1 and e1 <= e2)):
                    problems.append(NonMinimalRelations(
                        f"windows [{s1},{e1}) and [{s2},{e2}) on branch {branch} are nested",
                        location=f"monomial_relations[{i2}]",
                    ))

    for idx, row in enumerate(spec.linear_relations):
        where = f"linear_relations[{idx}]"
        for b in sorted(row):
            if not known(b):
                problems.append(UnknownBranch(f"no branch {b}", location=where))
            elif lengths[b - 1] == 1:
                problems.append(RelationOnArrow(f"branch {b} is a single arrow", location=where))
            elif b in monomial_branches:
                problems.append(MixedBranchClass(
                    f"branch {b} carries monomial relations and a linear relation", location=where,
                ))
    return problems


# ─── Vertices, paths, elements ──────────────────────────────────

@dataclass(frozen=True, order=True)
class Vertex:
    branch: int  # -1 for the source and the sink
    offset: int

    def label(self) -> str:
        if self == SOURCE:
            return "e0"
        if self == SINK:
            return "ew"
        return f"e{self.branch + 1}_{self.offset}"


SOURCE = Vertex(-1, 0)
SINK = Vertex(-1, 1)


@dataclass(frozen=True, order=True)
class Path:
    """A run of ``length`` arrows on ``branch`` starting at ``start``; length 0 is a trivial path."""

    branch: int
    start: int
    length: int

    @property
    def end(self) -> int:
        return self.start + self.length

    @property
    def is_trivial(self) -> bool:
        return self.length == 0

    @classmethod
    def trivial(cls, vertex: Vertex) -> "Path":
        return cls(vertex.branch, vertex.offset, 0)

    def sub(self, start: int, end: int) -> "Path":
        """Subpath between absolute offsets ``start`` and ``end`` of the same branch."""
        return Path(self.branch, start, end - start)


class Element(dict):
    """Exact linear combination of basis paths: ``{Path: coefficient}``, zeros dropped."""

    @classmethod
    def of(cls, path: Path, coeff=1) -> "Element":
        e = cls()
        e.add_term(path, coeff)
        return e

    def add_term(self, path: Path, coeff) -> None:
        new = self.get(path, QQ(0)) + q(coeff)
        if new == 0:
            self.pop(path, None)
        else:
            self[path] = new

    def add(self, other: "Element", factor=1) -> None:
        for path, coeff in other.items():
            self.add_term(path, coeff * factor)

    def scaled(self, factor) -> "Element":
        out = Element()
        out.add(self, factor)
        return out

    def __add__(self, other: "Element") -> "Element":
        out = Element(self)
        out.add(other)
        return out

    def __sub__(self, other: "Element") -> "Element":
        out = Element(self)
        out.add(other, -1)
        return out

    def __neg__(self) -> "Element":
        return self.scaled(-1)


# ─── The algebra ────────────────────────────────────────────────

@dataclass(frozen=True)
class QRhoGraph:
    vertices: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]
    components: tuple[tuple[int, ...], ...]

    @property
    def r(self) -> int:
        return len(self.components)

    def component_of(self, branch: int) -> int | None:
        for k, comp in enumerate(self.components):
            if branch in comp:
                return k
        return None


@dataclass(frozen=True, eq=False)
class ToupieAlgebra:
    spec: QuiverSpec
    branch_order: tuple[int, ...]  # canonical position -> input branch number
    lengths: tuple[int, ...]
    classes: tuple[str, ...]
    windows: tuple[tuple[tuple[int, int], ...], ...]  # per branch, sorted (start, end)
    rows: tuple[dict[int, Coeff], ...]  # reduced linear relations over canonical branches
    a: int
    l: int
    m: int
    n: int
    pivot_row: dict[int, int] = field(default_factory=dict)
    # results of memoized functions, freed together with the algebra
    memo: dict[str, dict] = field(default_factory=dict, repr=False)

    # ─── numeric invariants ───

    @property
    def num_branches(self) -> int:
        return len(self.lengths)

    @property
    def rank(self) -> int:
        return len(self.rows)

    @property
    def pivots(self) -> tuple[int, ...]:
        return tuple(min(row) for row in self.rows)

    @cached_property
    def D(self) -> int:
        d = len(self.full_basis)
        expected = self.a + self.l + self.n - self.rank
        if d != expected:
            raise ConstructionMismatch(f"#0B_w = {d} but a + l + n - rank(C) = {expected}")
        return d

    @property
    def d(self) -> int:
        return len(self.x_branches)

    @property
    def r(self) -> int:
        return self.q_rho.r

    @property
    def num_vertices(self) -> int:
        return 2 + sum(length - 1 for length in self.lengths)

    @property
    def num_arrows(self) -> int:
        return sum(self.lengths)

    def invariants(self) -> dict[str, int]:
        return {
            "a": self.a, "l": self.l, "m": self.m, "n": self.n, "r": self.r, "D": self.D,
            "d": self.d, "rank": self.rank,
            "num_vertices": self.num_vertices, "num_arrows": self.num_arrows,
        }

    # ─── branches ───

    def branches_of(self, cls: str) -> list[int]:
        return [c for c, k in enumerate(self.classes) if k == cls]

    def is_pivot(self, branch: int) -> bool:
        return branch in self.pivot_row

    def full(self, branch: int) -> Path:
        return Path(branch, 0, self.lengths[branch])

    def pivot_tail(self, row: int) -> Element:
        """f_ρ: the normal form of the pivot branch of ``row``."""
        pivot = self.pivots[row]
        tail = Element()
        for j, coeff in self.rows[row].items():
            if j != pivot:
                tail.add_term(self.full(j), -coeff)
        return tail

    @cached_property
    def x_branches(self) -> tuple[int, ...]:
        """Irreducible full branches taking part in linear relations."""
        involved = {j for row in self.rows for j in row}
        return tuple(sorted(j for j in involved if not self.is_pivot(j)))

    # ─── vertices and paths ───

    def vertex_at(self, branch: int, offset: int) -> Vertex:
        if offset == 0:
            return SOURCE
        if offset == self.lengths[branch]:
            return SINK
        return Vertex(branch, offset)

    def source(self, p: Path) -> Vertex:
        if p.is_trivial:
            return Vertex(p.branch, p.start)
        return self.vertex_at(p.branch, p.start)

    def target(self, p: Path) -> Vertex:
        if p.is_trivial:
            return Vertex(p.branch, p.start)
        return self.vertex_at(p.branch, p.end)

    @cached_property
    def vertices(self) -> tuple[Vertex, ...]:
        inner = [Vertex(c, k) for c, length in enumerate(self.lengths) for k in range(1, length)]
        return (SOURCE, SINK, *inner)

    @cached_property
    def arrows(self) -> tuple[Path, ...]:
        return tuple(Path(c, k, 1) for c, length in enumerate(self.lengths) for k in range(length))

    def run(self, branch: int, start: int, end: int) -> Path:
        """The subpath [start, end) of a branch; a trivial path sits at the matching vertex."""
        if start == end:
            return Path.trivial(self.vertex_at(branch, start))
        return Path(branch, start, end - start)

    def first_arrow(self, p: Path) -> Path | None:
        return None if p.is_trivial else Path(p.branch, p.start, 1)

    def contains_window(self, branch: int, start: int, end: int) -> bool:
        return any(start <= ws and we <= end for ws, we in self.windows[branch])

    def windows_in(self, p: Path) -> list[tuple[int, int]]:
        if p.is_trivial:
            return []
        return [(ws, we) for ws, we in self.windows[p.branch] if p.start <= ws and we <= p.end]

    def is_irreducible(self, p: Path) -> bool:
        if p.is_trivial:
            return True
        if self.contains_window(p.branch, p.start, p.end):
            return False
        return not (p.start == 0 and p.length == self.lengths[p.branch] and self.is_pivot(p.branch))

    def reduce(self, p: Path) -> Element:
        """Normal form of a path of kQ in the basis 𝓑."""
        if p.is_trivial:
            return Element.of(p)
        if self.contains_window(p.branch, p.start, p.end):
            return Element()
        if p.start == 0 and p.length == self.lengths[p.branch] and self.is_pivot(p.branch):
            return self.pivot_tail(self.pivot_row[p.branch])
        return Element.of(p)

    def concat(self, p: Path, q: Path) -> Path | None:
        """The path pq of kQ, or None when p and q do not compose."""
        if self.target(p) != self.source(q):
            return None
        if p.is_trivial:
            return q
        if q.is_trivial:
            return p
        return Path(p.branch, p.start, p.length + q.length)

    def mul_paths(self, p: Path, q: Path) -> Element:
        pq = self.concat(p, q)
        return Element() if pq is None else self.reduce(pq)

    def multiply(self, x: Element, y: Element) -> Element:
        out = Element()
        for p, cp in x.items():
            for q_, cq in y.items():
                out.add(self.mul_paths(p, q_), cp * cq)
        return out

    def paths_between(self, u: Vertex, v: Vertex) -> list[Path]:
        """Basis paths from u to v."""
        if u == v:
            return [Path.trivial(u)]
        if u == SOURCE and v == SINK:
            return list(self.full_basis)
        if u == SINK or v == SOURCE:
            return []
        if u == SOURCE:
            run = Path(v.branch, 0, v.offset)
        elif v == SINK:
            run = Path(u.branch, u.offset, self.lengths[u.branch] - u.offset)
        elif u.branch == v.branch and u.offset < v.offset:
            run = Path(u.branch, u.offset, v.offset - u.offset)
        else:
            return []
        return [run] if self.is_irreducible(run) else []

    @cached_property
    def basis(self) -> tuple[Path, ...]:
        runs = [
            Path(c, s, length)
            for c, total in enumerate(self.lengths)
            for s in range(total)
            for length in range(1, total - s + 1)
        ]
        trivial = [Path.trivial(v) for v in self.vertices]
        return tuple(sorted(trivial + [p for p in runs if self.is_irreducible(p)]))

    @cached_property
    def nontrivial_basis(self) -> tuple[Path, ...]:
        return tuple(p for p in self.basis if not p.is_trivial)

    @cached_property
    def full_basis(self) -> tuple[Path, ...]:
        """₀𝓑_ω in canonical branch order."""
        return tuple(self.full(c) for c in range(self.num_branches) if self.is_irreducible(self.full(c)))

    @cached_property
    def q_rho(self) -> QRhoGraph:
        verts = tuple(c for c, k in enumerate(self.classes) if k in (RELATION_FREE, NON_MONOMIAL))
        index = {c: i for i, c in enumerate(verts)}
        uf = UnionFind(len(verts))
        edges = set()
        for row in self.rows:
            members = sorted(row)
            for i, u in enumerate(members):
                for v in members[i + 1:]:
                    edges.add((u, v))
                    uf.union(index[u], index[v])
        comps = tuple(tuple(verts[i] for i in comp) for comp in uf.retrieve_components())
        return QRhoGraph(vertices=verts, edges=tuple(sorted(edges)), components=comps)

    def last_relation(self, component: tuple[int, ...]) -> int | None:
        """Row of the component whose pivot is maximal, None if it carries no relation."""
        rows = [self.pivot_row[c] for c in component if self.is_pivot(c)]
        return max(rows, key=lambda i: self.pivots[i]) if rows else None

    # ─── labels ───

    def path_label(self, p: Path) -> str:
        if p.is_trivial:
            return Vertex(p.branch, p.start).label()
        if p.start == 0 and p.length == self.lengths[p.branch]:
            return f"a{p.branch + 1}"
        if p.length == 1:
            return f"a{p.branch + 1}_{p.start}"
        return f"a{p.branch + 1}[{p.start}:{p.end}]"

    def element_label(self, x: Element) -> str:
        return format_combination((self.path_label(p), c) for p, c in sorted(x.items()))


def format_rational(c) -> str:
    num, den = int(c.numerator), int(c.denominator)
    return str(num) if den == 1 else f"{num}/{den}"


def format_combination(terms: Iterable[tuple[str, Coeff]]) -> str:
    out = ""
    for label, c in terms:
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        mag = -c if c < 0 else c
        coef = "" if mag == 1 else f"{format_rational(mag)} "
        if not out:
            out = f"{'-' if sign == '-' else ''}{coef}{label}"
        else:
            out += f" {sign} {coef}{label}"
    return out or "0"


# ─── Construction ───────────────────────────────────────────────

def rref(rows: list[list]) -> tuple[list[list], int]:
    """RREF of dense rational rows; returns the nonzero reduced rows and the rank."""
    if not rows:
        return [], 0
    ncols = max(len(r) for r in rows)
    sparse = [{j: q(v) for j, v in enumerate(r) if v != 0} for r in rows]
    reduced, rank = rref_rows(sparse, ncols)
    return [[row.get(j, QQ(0)) for j in range(ncols)] for row in reduced], rank


def classify(spec: QuiverSpec) -> list[str]:
    monomial = {rel.branch for rel in spec.monomial_relations}
    linear = {b for row in spec.linear_relations for b, c in row.items() if c != 0}
    out = []
    for i, length in enumerate(spec.branch_lengths, start=1):
        if length == 1:
            out.append(Z_ARROW)
        elif i in monomial:
            out.append(MONOMIAL)
        elif i in linear:
            out.append(NON_MONOMIAL)
        else:
            out.append(RELATION_FREE)
    return out


def validate_and_build(spec: QuiverSpec) -> ToupieAlgebra:
    problems = check_spec(spec)
    if problems:
        raise problems[0]

    input_classes = classify(spec)
    order = tuple(
        i + 1 for cls in CLASS_ORDER for i, k in enumerate(input_classes) if k == cls
    )
    canonical = {b: c for c, b in enumerate(order)}
    lengths = tuple(spec.branch_lengths[b - 1] for b in order)
    classes = tuple(input_classes[b - 1] for b in order)

    windows: list[list[tuple[int, int]]] = [[] for _ in order]
    for rel in spec.monomial_relations:
        windows[canonical[rel.branch]].append((rel.start, rel.end))

    ncols = len(order)
    rows_in = [
        {canonical[b]: q(c) for b, c in row.items() if c != 0}
        for row in spec.linear_relations
    ]
    for i in range(len(rows_in)):
        _, rank = rref_rows(rows_in[: i + 1], ncols)
        if rank <= i:
            raise ZeroRow(
                "linear relation is a combination of the previous ones (reduces to 0)",
                location=f"linear_relations[{i}]",
            )
    reduced, _ = rref_rows(rows_in, ncols)
    for row in reduced:
        if len(row) < 2:
            (only,) = row
            raise SingleBranchRelation(
                f"the linear relations force branch {order[only]} to vanish; "
                "declare it as a monomial relation instead",
                location="linear_relations",
            )

    pivot_row = {min(row): i for i, row in enumerate(reduced)}
    alg = ToupieAlgebra(
        spec=spec,
        branch_order=order,
        lengths=lengths,
        classes=classes,
        windows=tuple(tuple(sorted(w)) for w in windows),
        rows=tuple(reduced),
        a=classes.count(Z_ARROW),
        l=classes.count(RELATION_FREE),
        m=classes.count(MONOMIAL),
        n=classes.count(NON_MONOMIAL),
        pivot_row=pivot_row,
    )
    logger.info("built toupie algebra %s", alg.invariants())
    return alg
