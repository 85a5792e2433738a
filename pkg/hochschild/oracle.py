"""
Brute-force Hochschild cohomology from the E-reduced bar complex.

Nothing here uses the minimal complex except through φ* and η*, so the
dimensions and brackets computed here are an independent check of the
cohomology and gerstenhaber modules.
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property

from sympy import QQ

from . import config
from . import resolution as res
from .algebra import Element, Path, ToupieAlgebra, Vertex, memoized
from .cohomology import CochainBasisElement, CohomologyClass, cochain_space, generators, hh_basis, hh_dimension
from .errors import BudgetExceeded, DegreeMismatch
from .gerstenhaber import action_matrix, bracket_table
from .linalg import RationalMatrix, Vector, add_into

logger = logging.getLogger(__name__)

Chain = tuple[Path, ...]
Slot = tuple[Chain, Vertex]  # a chain with its source vertex; degree 0 chains are () at a vertex


@dataclass(frozen=True)
class BarCochainBasisElement:
    chain: Chain
    source: Vertex
    value: Path

    @property
    def slot(self) -> Slot:
        return self.chain, self.source

    def label(self, alg: ToupieAlgebra) -> str:
        args = "⊗".join(alg.path_label(p) for p in self.chain) or self.source.label()
        return f"({args})‖{alg.path_label(self.value)}"


@dataclass(frozen=True, eq=False)
class BarCochainSpace:
    degree: int
    basis: tuple[BarCochainBasisElement, ...]

    @cached_property
    def index(self) -> dict[BarCochainBasisElement, int]:
        return {b: i for i, b in enumerate(self.basis)}

    @cached_property
    def by_slot(self) -> dict[Slot, list[tuple[int, Path]]]:
        out: dict[Slot, list[tuple[int, Path]]] = {}
        for i, b in enumerate(self.basis):
            out.setdefault(b.slot, []).append((i, b.value))
        return out

    @property
    def dim(self) -> int:
        return len(self.basis)

    def vector(self, chain: Chain, source: Vertex, value: Element) -> Vector:
        out: Vector = {}
        for path, coeff in value.items():
            add_into(out, {self.index[BarCochainBasisElement(chain, source, path)]: coeff})
        return out

    def values(self, vec: Vector) -> dict[Slot, Element]:
        """The cochain as a map slot -> element of A."""
        out: dict[Slot, Element] = {}
        for i, c in vec.items():
            b = self.basis[i]
            out.setdefault(b.slot, Element()).add_term(b.value, c)
        return out


def _budget(budget: int | None) -> int:
    return config.ORACLE_BUDGET if budget is None else budget


def bar_chains(alg: ToupieAlgebra, degree: int, budget: int | None = None) -> list[Chain]:
    """Composable tuples of ``degree`` nontrivial basis paths, pruned by endpoints."""
    if degree < 1:
        raise DegreeMismatch(f"bar chains have at least one entry, got degree {degree}")
    limit = _budget(budget)
    starting: dict[Vertex, list[Path]] = {}
    for p in alg.nontrivial_basis:
        starting.setdefault(alg.source(p), []).append(p)
    chains: list[Chain] = [(p,) for p in alg.nontrivial_basis]
    for _ in range(degree - 1):
        grown = []
        for ch in chains:
            grown.extend(ch + (p,) for p in starting.get(alg.target(ch[-1]), []))
            if len(grown) > limit:
                raise BudgetExceeded(degree, len(grown), limit)
        chains = grown
    if len(chains) > limit:
        raise BudgetExceeded(degree, len(chains), limit)
    return chains


@memoized
def bar_cochain_space(alg: ToupieAlgebra, degree: int, budget: int | None = None) -> BarCochainSpace:
    if degree == 0:
        basis = tuple(BarCochainBasisElement((), v, Path.trivial(v)) for v in alg.vertices)
    else:
        basis = tuple(
            BarCochainBasisElement(ch, alg.source(ch[0]), value)
            for ch in bar_chains(alg, degree, budget)
            for value in alg.paths_between(alg.source(ch[0]), alg.target(ch[-1]))
        )
    logger.info("bar cochains of degree %d: %d basis elements", degree, len(basis))
    return BarCochainSpace(degree, basis)


def _slot(alg: ToupieAlgebra, chain: Chain, at: Vertex | None = None) -> Slot:
    return (chain, alg.source(chain[0])) if chain else ((), at)


def _apply_on(alg: ToupieAlgebra, values: dict[Slot, Element], chain: Chain, at: Vertex | None = None) -> Element:
    return values.get(_slot(alg, chain, at), Element())


@memoized
def bar_differential(alg: ToupieAlgebra, degree: int, budget: int | None = None) -> RationalMatrix:
    """Matrix of ε_degree from bar cochains of degree n to degree n + 1."""
    src = bar_cochain_space(alg, degree, budget)
    dst = bar_cochain_space(alg, degree + 1, budget)
    m = RationalMatrix(dst.dim, src.dim)
    slots = src.by_slot

    def put(chain: Chain, source: Vertex, inner: Slot, left: Path | None, right: Path | None, sign) -> None:
        for j, value in slots.get(inner, []):
            image = Element.of(value)
            if left is not None:
                image = alg.multiply(Element.of(left), image)
            if right is not None:
                image = alg.multiply(image, Element.of(right))
            for path, c in image.items():
                m.add(dst.index[BarCochainBasisElement(chain, source, path)], j, sign * c)

    chains = {b.chain for b in dst.basis}
    for chain in sorted(chains):
        source = alg.source(chain[0])
        first, last = chain[0], chain[-1]
        put(chain, source, _slot(alg, chain[1:], alg.target(first)), first, None, 1)
        for i in range(len(chain) - 1):
            for p, cp in alg.mul_paths(chain[i], chain[i + 1]).items():
                merged = chain[:i] + (p,) + chain[i + 2:]
                put(chain, source, _slot(alg, merged), None, None, (-1) ** (i + 1) * cp)
        put(chain, source, _slot(alg, chain[:-1], source), None, last, (-1) ** len(chain))
    logger.debug("ε%d: %r", degree, m)
    return m


def oracle_dimensions(alg: ToupieAlgebra, max_degree: int, budget: int | None = None) -> list[int]:
    """dim HH^i for i = 0..max_degree from ranks of the bar differentials."""
    dims = []
    previous = 0
    for n in range(max_degree + 1):
        rank = bar_differential(alg, n, budget).rank()
        dims.append(bar_cochain_space(alg, n, budget).dim - rank - previous)
        previous = rank
    logger.info("bar complex dimensions up to degree %d: %s", max_degree, dims)
    return dims


# ─── Comparison maps on cochains ────────────────────────────────

def _eta_tensor(alg: ToupieAlgebra, degree: int, chain: Chain, at: Vertex, closed: bool) -> res.Tensor:
    if degree == 0:
        unit = res.Tensor()
        unit.add_term((Path.trivial(at), (), Path.trivial(at)), 1)
        return res.eta(alg, 0, unit)
    if closed and degree <= 3:
        return res.eta_closed(alg, degree, chain)
    return res.eta(alg, degree, res.bar_pure(alg, chain))


def _phi_tensor(alg: ToupieAlgebra, degree: int, gen, closed: bool) -> res.Tensor:
    if closed and 1 <= degree <= 3:
        return res.phi_closed(alg, degree, gen)
    return res.phi(alg, degree, res.pure(gen))


@memoized
def eta_star(alg: ToupieAlgebra, degree: int, closed: bool = True, budget: int | None = None) -> RationalMatrix:
    """η*: minimal cochains of ``degree`` to bar cochains, (η*f)(a) = f̃(η(1 ⊗ a ⊗ 1))."""
    minimal = cochain_space(alg, degree)
    bar = bar_cochain_space(alg, degree, budget)
    by_gen: dict = {}
    for j, b in enumerate(minimal.basis):
        by_gen.setdefault(b.generator, []).append((j, b.value))
    m = RationalMatrix(bar.dim, minimal.dim)
    for (chain, source) in bar.by_slot:
        for (lam, gen, mu), c in _eta_tensor(alg, degree, chain, source, closed).items():
            for j, value in by_gen.get(gen, []):
                image = alg.multiply(alg.mul_paths(lam, value), Element.of(mu))
                for path, cp in image.items():
                    m.add(bar.index[BarCochainBasisElement(chain, source, path)], j, c * cp)
    return m


@memoized
def phi_star(alg: ToupieAlgebra, degree: int, closed: bool = True, budget: int | None = None) -> RationalMatrix:
    """φ*: bar cochains of ``degree`` to minimal cochains, (φ*F)(g) = F̃(φ(1 ⊗ g ⊗ 1))."""
    minimal = cochain_space(alg, degree)
    bar = bar_cochain_space(alg, degree, budget)
    m = RationalMatrix(minimal.dim, bar.dim)
    for gen in generators(alg, degree):
        for (lam, chain, mu), c in _phi_tensor(alg, degree, gen, closed).items():
            slot = _slot(alg, chain, alg.target(lam))
            for j, value in bar.by_slot.get(slot, []):
                image = alg.multiply(alg.mul_paths(lam, value), Element.of(mu))
                for path, cp in image.items():
                    m.add(minimal.index[CochainBasisElement(gen, path)], j, c * cp)
    return m


def apply(matrix: RationalMatrix, vec: Vector) -> Vector:
    if not vec:
        return {}
    return (matrix @ RationalMatrix.from_columns(matrix.ncols, [vec])).column(0)


# ─── Products on bar cochains ───────────────────────────────────

def _evaluate_with(alg: ToupieAlgebra, values: dict[Slot, Element], chain: tuple, at: Vertex) -> Element:
    """F on a chain whose entries may be elements of A; trivial paths vanish in Ā."""
    out = Element()

    def expand(done: Chain, rest: tuple, coeff) -> None:
        if not rest:
            out.add(_apply_on(alg, values, done, at), coeff)
            return
        head = rest[0]
        if isinstance(head, Path):
            expand(done + (head,), rest[1:], coeff)
            return
        for p, cp in head.items():
            if not p.is_trivial:
                expand(done + (p,), rest[1:], coeff * cp)

    expand((), chain, QQ(1))
    return out


def circle(alg: ToupieAlgebra, f: dict[Slot, Element], m: int, g: dict[Slot, Element], n: int, chain: Chain) -> Element:
    """(f ∘ g)(chain) = Σ_i (−1)^{(i−1)(n−1)} f(a_1, …, g(a_i, …, a_{i+n−1}), …)"""
    out = Element()
    for i in range(m):
        inner = chain[i:i + n]
        at = alg.source(chain[i]) if chain else None
        g_value = _apply_on(alg, g, inner, at)
        if not g_value:
            continue
        outer = chain[:i] + (g_value,) + chain[i + n:]
        start = alg.source(chain[0]) if chain else None
        out.add(_evaluate_with(alg, f, outer, start), (-1) ** (i * (n - 1)))
    return out


def cup_value(alg: ToupieAlgebra, f: dict[Slot, Element], m: int, g: dict[Slot, Element], chain: Chain) -> Element:
    left = _apply_on(alg, f, chain[:m], alg.source(chain[0]))
    right = _apply_on(alg, g, chain[m:], alg.target(chain[m - 1]))
    return alg.multiply(left, right)


def _bracket_vector(alg: ToupieAlgebra, F: Vector, m: int, G: Vector, n: int, budget: int | None) -> Vector:
    fs, gs = bar_cochain_space(alg, m, budget), bar_cochain_space(alg, n, budget)
    fv, gv = fs.values(F), gs.values(G)
    target = bar_cochain_space(alg, m + n - 1, budget)
    sign = (-1) ** ((m - 1) * (n - 1))
    out: Vector = {}
    for chain, source in target.by_slot:
        value = circle(alg, fv, m, gv, n, chain) - circle(alg, gv, n, fv, m, chain).scaled(sign)
        add_into(out, target.vector(chain, source, value))
    return out


def _cup_vector(alg: ToupieAlgebra, F: Vector, m: int, G: Vector, n: int, budget: int | None) -> Vector:
    fv = bar_cochain_space(alg, m, budget).values(F)
    gv = bar_cochain_space(alg, n, budget).values(G)
    target = bar_cochain_space(alg, m + n, budget)
    out: Vector = {}
    for chain, source in target.by_slot:
        add_into(out, target.vector(chain, source, cup_value(alg, fv, m, gv, chain)))
    return out


def lift(alg: ToupieAlgebra, cls: CohomologyClass, budget: int | None = None) -> Vector:
    """A bar cocycle representing ``cls``: η* of its minimal representative."""
    return apply(eta_star(alg, cls.degree, True, budget), hh_basis(alg, cls.degree).representative(cls))


def oracle_bracket_deg1(alg: ToupieAlgebra, f: CohomologyClass, g: CohomologyClass,
                        budget: int | None = None) -> CohomologyClass:
    if f.degree != 1 or g.degree != 1:
        raise DegreeMismatch(f"oracle_bracket_deg1 needs two degree-one classes, got {f.degree} and {g.degree}")
    bracket = _bracket_vector(alg, lift(alg, f, budget), 1, lift(alg, g, budget), 1, budget)
    return hh_basis(alg, 1).project(apply(phi_star(alg, 1, True, budget), bracket))


def oracle_action(alg: ToupieAlgebra, f: CohomologyClass, v: CohomologyClass,
                  budget: int | None = None) -> CohomologyClass:
    """[f, v] for f in HH¹ and v in HH^n, n >= 2, computed on bar cochains and pulled back by φ*."""
    if f.degree != 1 or v.degree < 2:
        raise DegreeMismatch(f"oracle_action needs degrees (1, n >= 2), got ({f.degree}, {v.degree})")
    n = v.degree
    bracket = _bracket_vector(alg, lift(alg, f, budget), 1, lift(alg, v, budget), n, budget)
    return hh_basis(alg, n).project(apply(phi_star(alg, n, True, budget), bracket))


def is_coboundary(alg: ToupieAlgebra, vec: Vector, degree: int, budget: int | None = None) -> bool:
    if not vec:
        return True
    if degree == 0:
        return False
    (solution,) = bar_differential(alg, degree - 1, budget).solve([vec])
    return solution is not None


def oracle_vanishing_check(alg: ToupieAlgebra, degrees: tuple[int, int], kind: str = "cup",
                           sample: int | None = None, budget: int | None = None) -> bool:
    """
    Check on bar cochains that cup products (degrees >= 1) or brackets
    (degrees >= 2) of labeled classes are coboundaries.

    ``sample`` caps the number of pairs tried. Every failing pair is logged.
    """
    m, n = degrees
    if kind == "cup" and min(m, n) < 1:
        raise DegreeMismatch(f"cup vanishing needs positive degrees, got {degrees}")
    if kind == "bracket" and min(m, n) < 2:
        raise DegreeMismatch(f"bracket vanishing needs degrees >= 2, got {degrees}")
    left, right = hh_basis(alg, m), hh_basis(alg, n)
    pairs = [(i, j) for i in range(len(left)) for j in range(len(right))]
    if sample is not None:
        pairs = pairs[:sample]
    ok = True
    for i, j in pairs:
        F, G = lift(alg, left.element(i), budget), lift(alg, right.element(j), budget)
        if kind == "cup":
            vec, target = _cup_vector(alg, F, m, G, n, budget), m + n
        else:
            vec, target = _bracket_vector(alg, F, m, G, n, budget), m + n - 1
        if not is_coboundary(alg, vec, target, budget):
            logger.warning("%s of %s and %s is not a coboundary in degree %d",
                           kind, left.labels[i], right.labels[j], target)
            ok = False
    logger.info("%s vanishing in degrees %s: %d pairs, %s", kind, degrees, len(pairs), "ok" if ok else "FAILED")
    return ok


# ─── Agreement report ───────────────────────────────────────────

@dataclass
class OracleReport:
    max_degree: int
    minimal_dimensions: list[int] = field(default_factory=list)
    bar_dimensions: list[int] = field(default_factory=list)
    bracket_pairs: int = 0
    bracket_mismatches: list[str] = field(default_factory=list)
    action_pairs: int = 0
    action_mismatches: list[str] = field(default_factory=list)
    vanishing: dict[str, bool] = field(default_factory=dict)
    budget_error: BudgetExceeded | None = None

    @property
    def agrees(self) -> bool:
        return (
            self.minimal_dimensions[:len(self.bar_dimensions)] == self.bar_dimensions
            and not self.bracket_mismatches
            and not self.action_mismatches
            and all(self.vanishing.values())
        )


def run_oracle(alg: ToupieAlgebra, max_degree: int, budget: int | None = None) -> OracleReport:
    """Everything the oracle can check within ``budget``; a budget overrun keeps the partial results."""
    report = OracleReport(max_degree, minimal_dimensions=[hh_dimension(alg, i) for i in range(max_degree + 1)])
    try:
        previous = 0
        for n in range(max_degree + 1):
            rank = bar_differential(alg, n, budget).rank()
            report.bar_dimensions.append(bar_cochain_space(alg, n, budget).dim - rank - previous)
            previous = rank

        table = bracket_table(alg)
        basis = hh_basis(alg, 1)
        for (i, j), expected in sorted(table.entries.items()):
            got = oracle_bracket_deg1(alg, basis.element(i), basis.element(j), budget)
            report.bracket_pairs += 1
            if got != expected:
                report.bracket_mismatches.append(
                    f"[{basis.labels[i]}, {basis.labels[j]}]: table {expected.pretty()}, bar {got.pretty()}"
                )

        if max_degree >= 2:
            report.vanishing["cup 1x1"] = oracle_vanishing_check(alg, (1, 1), "cup", budget=budget)
        if max_degree >= 3 and hh_dimension(alg, 2):
            report.vanishing["bracket 2x2"] = oracle_vanishing_check(alg, (2, 2), "bracket", budget=budget)

        for n in range(2, max_degree + 1):
            target = hh_basis(alg, n)
            for i in range(len(basis)):
                for j, expected in enumerate(action_matrix(alg, basis.element(i), n)):
                    got = oracle_action(alg, basis.element(i), target.element(j), budget)
                    report.action_pairs += 1
                    if got != expected:
                        report.action_mismatches.append(
                            f"[{basis.labels[i]}, {target.labels[j]}]: action {expected.pretty()}, bar {got.pretty()}"
                        )
    except BudgetExceeded as exc:
        logger.warning("oracle stopped: %s", exc.detail)
        report.budget_error = exc
    return report
