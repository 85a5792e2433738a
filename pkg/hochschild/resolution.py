"""
The minimal resolution, the E-reduced bar resolution and the comparison maps.

Both resolutions are handled as free A-bimodules. An element is a ``Tensor``:
``{(λ, middle, μ): coefficient}`` with λ, μ basis paths of A. The middle of a
minimal tensor is a ``Generator`` of level k (vertex, arrow, relation or
ambiguity); the middle of a bar tensor is a tuple of nontrivial basis paths,
``()`` at level 0.

φ_k = t φ_{k-1} ∂_k and η_k = s η_{k-1} δ_k are built by recursion from the
homotopies. The closed forms for k <= 3 are kept separately so the tests can
compare both.
"""

import logging

from sympy import QQ

from . import config
from .algebra import SINK, SOURCE, Path, ToupieAlgebra, Vertex, memoized
from .ambiguity import Ambiguity, ambiguities_in, n_ambiguities
from .cohomology import RHO, Generator, generators, relation_terms
from .errors import ConstructionMismatch, DegreeMismatch, DegreeUnsupported
from .linalg import q

logger = logging.getLogger(__name__)

Chain = tuple[Path, ...]


class Tensor(dict):
    """Exact combination of pure tensors λ ⊗ middle ⊗ μ, zeros dropped."""

    def add_term(self, key: tuple, coeff) -> None:
        new = self.get(key, QQ(0)) + q(coeff)
        if new == 0:
            self.pop(key, None)
        else:
            self[key] = new

    def add(self, other: "Tensor", factor=1) -> None:
        for key, coeff in other.items():
            self.add_term(key, coeff * factor)

    def scaled(self, factor) -> "Tensor":
        out = Tensor()
        out.add(self, factor)
        return out

    def __add__(self, other: "Tensor") -> "Tensor":
        out = Tensor(self)
        out.add(other)
        return out

    def __sub__(self, other: "Tensor") -> "Tensor":
        out = Tensor(self)
        out.add(other, -1)
        return out


def _unit(v: Vertex) -> Path:
    return Path.trivial(v)


def _add_reduced(alg: ToupieAlgebra, out: Tensor, left: Path, middle, right: Path, coeff=1) -> None:
    """Add left ⊗ middle ⊗ right with both outer factors rewritten in the basis of A."""
    for p, cp in alg.reduce(left).items():
        for r, cr in alg.reduce(right).items():
            out.add_term((p, middle, r), coeff * cp * cr)


def sandwich(alg: ToupieAlgebra, left: Path, x: Tensor, right: Path) -> Tensor:
    """left · x · right"""
    out = Tensor()
    for (lam, middle, mu), c in x.items():
        for p, cp in alg.mul_paths(left, lam).items():
            for r, cr in alg.mul_paths(mu, right).items():
                out.add_term((p, middle, r), c * cp * cr)
    return out


def _extend(alg: ToupieAlgebra, x: Tensor, on_middle) -> Tensor:
    """Bimodule extension of a map given on 1 ⊗ middle ⊗ 1."""
    out = Tensor()
    for (lam, middle, mu), c in x.items():
        out.add(sandwich(alg, lam, on_middle(middle), mu), c)
    return out


# ─── Generators ─────────────────────────────────────────────────

@memoized
def _generator_index(alg: ToupieAlgebra, level: int) -> dict[tuple, Generator]:
    return {g.key: g for g in generators(alg, level)}


def generator_at(alg: ToupieAlgebra, level: int, key: tuple) -> Generator:
    try:
        return _generator_index(alg, level)[key]
    except KeyError:
        raise ConstructionMismatch(f"no level-{level} generator with key {key}") from None


def _vertex_gen(alg: ToupieAlgebra, v: Vertex) -> Generator:
    return generator_at(alg, 0, (v.branch, v.offset))


@memoized
def _ambiguity(alg: ToupieAlgebra, n: int, key: tuple) -> Ambiguity:
    for w in n_ambiguities(alg, n):
        if w.key == key:
            return w
    raise ConstructionMismatch(f"no {n}-ambiguity with key {key}")


def pure(gen: Generator) -> Tensor:
    out = Tensor()
    out.add_term((_unit(gen.source), gen, _unit(gen.target)), 1)
    return out


def bar_pure(alg: ToupieAlgebra, chain: Chain) -> Tensor:
    out = Tensor()
    out.add_term((_unit(alg.source(chain[0])), chain, _unit(alg.target(chain[-1]))), 1)
    return out


# ─── Minimal resolution ─────────────────────────────────────────

@memoized
def _d_gen(alg: ToupieAlgebra, level: int, gen: Generator) -> Tensor:
    out = Tensor()
    if level == 1:
        alpha = Path(gen.key[0], gen.key[1], 1)
        out.add_term((alpha, _vertex_gen(alg, gen.target), _unit(gen.target)), 1)
        out.add_term((_unit(gen.source), _vertex_gen(alg, gen.source), alpha), -1)
        return out
    if level == 2:
        for coeff, path in relation_terms(alg, gen):
            c = path.branch
            for x in range(path.start, path.end):
                arrow = generator_at(alg, 1, (c, x))
                _add_reduced(alg, out, alg.run(c, path.start, x), arrow, alg.run(c, x + 1, path.end), coeff)
        return out
    n = level - 1
    w = _ambiguity(alg, n, gen.key)
    c, s, e = w.key
    if n % 2 == 0:
        f = w.right_cuts[-2]
        g = w.left_cuts[-2]
        _add_reduced(alg, out, alg.run(c, s, f), generator_at(alg, level - 1, (c, f, e)), _unit(gen.target))
        _add_reduced(alg, out, _unit(gen.source), generator_at(alg, level - 1, (c, s, g)), alg.run(c, g, e), -1)
    else:
        for sub in ambiguities_in(alg, w.path, n - 1):
            _add_reduced(alg, out, alg.run(c, s, sub.start), generator_at(alg, level - 1, sub.key), alg.run(c, sub.end, e))
    return out


def minimal_differential(alg: ToupieAlgebra, level: int, x: Tensor) -> Tensor:
    """∂_level from level ``level`` to ``level - 1``."""
    if level < 1:
        raise DegreeMismatch(f"the minimal differential starts at level 1, got {level}")
    return _extend(alg, x, lambda gen: _d_gen(alg, level, gen))


@memoized
def _s_gen(alg: ToupieAlgebra, level: int, gen: Generator, right: Path) -> Tensor:
    """s_level(e ⊗ gen ⊗ right)"""
    out = Tensor()
    if level == 0:
        if right.is_trivial:
            return out
        c = right.branch
        for x in range(right.start, right.end):
            _add_reduced(alg, out, alg.run(c, right.start, x), generator_at(alg, 1, (c, x)), alg.run(c, x + 1, right.end), -1)
        return out
    if level == 1:
        c, x = gen.key
        alpha = Path(c, x, 1)
        p = alg.concat(alpha, right)
        if p.start == 0 and p.end == alg.lengths[c] and alg.is_pivot(c):
            rho = generator_at(alg, 2, (alg.pivot_row[c],))
            out.add_term((_unit(SOURCE), rho, _unit(SINK)), 1)
            return out
        window = next(((ws, we) for ws, we in alg.windows[c] if ws == x), None)
        if window is not None and window[1] <= p.end:
            sigma = generator_at(alg, 2, (c, x, window[1]))
            _add_reduced(alg, out, _unit(gen.source), sigma, alg.run(c, window[1], p.end))
        return out
    if gen.kind == RHO:
        return out
    c, s, e = gen.key
    p = alg.concat(Path(c, s, e - s), right)
    sign = -1 if level % 2 == 0 else 1
    for w in ambiguities_in(alg, p, level):
        _add_reduced(alg, out, alg.run(c, s, w.start), generator_at(alg, level + 1, w.key), alg.run(c, w.end, p.end), sign)
    return out


def homotopy(alg: ToupieAlgebra, level: int, x: Tensor) -> Tensor:
    """The contracting homotopy s_level of the minimal resolution, a left module map."""
    out = Tensor()
    for (lam, gen, mu), c in x.items():
        part = _s_gen(alg, level, gen, mu)
        for (p, middle, r), cp in part.items():
            for pp, cl in alg.mul_paths(lam, p).items():
                out.add_term((pp, middle, r), c * cp * cl)
    return out


# ─── E-reduced bar resolution ───────────────────────────────────

def bar_differential(alg: ToupieAlgebra, level: int, x: Tensor) -> Tensor:
    """δ_level: λ ⊗ a₁ ⊗ … ⊗ a_m ⊗ μ ↦ λa₁ ⊗ … + Σ (−1)^i … a_i a_{i+1} … + (−1)^m … ⊗ a_m μ."""
    if level < 1:
        raise DegreeMismatch(f"the bar differential starts at level 1, got {level}")
    out = Tensor()
    for (lam, chain, mu), c in x.items():
        for p, cp in alg.mul_paths(lam, chain[0]).items():
            out.add_term((p, chain[1:], mu), c * cp)
        for i in range(len(chain) - 1):
            for p, cp in alg.mul_paths(chain[i], chain[i + 1]).items():
                out.add_term((lam, chain[:i] + (p,) + chain[i + 2:], mu), (-1) ** (i + 1) * c * cp)
        for r, cr in alg.mul_paths(chain[-1], mu).items():
            out.add_term((lam, chain[:-1], r), (-1) ** len(chain) * c * cr)
    return out


def bar_homotopy(alg: ToupieAlgebra, x: Tensor) -> Tensor:
    """t: λ ⊗ a₁ ⊗ … ⊗ μ ↦ 1 ⊗ λ̄ ⊗ a₁ ⊗ … ⊗ μ, zero when λ is trivial."""
    out = Tensor()
    for (lam, chain, mu), c in x.items():
        if not lam.is_trivial:
            out.add_term((_unit(alg.source(lam)), (lam,) + chain, mu), c)
    return out


# ─── Comparison morphisms by recursion ──────────────────────────

def _check_cap(level: int) -> None:
    if level > config.RECURSION_CAP:
        raise DegreeUnsupported(f"comparison maps are built up to level {config.RECURSION_CAP}, asked for {level}")


@memoized
def _phi_gen(alg: ToupieAlgebra, level: int, gen: Generator) -> Tensor:
    return bar_homotopy(alg, phi(alg, level - 1, minimal_differential(alg, level, pure(gen))))


def phi(alg: ToupieAlgebra, level: int, x: Tensor) -> Tensor:
    """φ_level from the minimal resolution to the bar resolution."""
    _check_cap(level)
    if level == 0:
        out = Tensor()
        for (lam, _gen, mu), c in x.items():
            out.add_term((lam, (), mu), c)
        return out
    return _extend(alg, x, lambda gen: _phi_gen(alg, level, gen))


@memoized
def _eta_chain(alg: ToupieAlgebra, level: int, chain: Chain) -> Tensor:
    below = eta(alg, level - 1, bar_differential(alg, level, bar_pure(alg, chain)))
    return homotopy(alg, level - 1, below)


def eta(alg: ToupieAlgebra, level: int, x: Tensor) -> Tensor:
    """η_level from the bar resolution to the minimal resolution."""
    _check_cap(level)
    if level == 0:
        out = Tensor()
        for (lam, _chain, mu), c in x.items():
            out.add_term((lam, _vertex_gen(alg, alg.target(lam)), mu), c)
        return out
    out = _extend(alg, x, lambda chain: _eta_chain(alg, level, chain))
    logger.debug("η_%d applied to %d terms gives %d terms", level, len(x), len(out))
    return out


# ─── Closed forms ───────────────────────────────────────────────

def phi_closed(alg: ToupieAlgebra, level: int, gen: Generator) -> Tensor:
    """φ_level(1 ⊗ gen ⊗ 1) for level <= 3 without the recursion."""
    out = Tensor()
    if level == 1:
        alpha = Path(gen.key[0], gen.key[1], 1)
        out.add_term((_unit(gen.source), (alpha,), _unit(gen.target)), 1)
        return out
    if level == 2:
        for coeff, path in relation_terms(alg, gen):
            c = path.branch
            for x in range(path.start + 1, path.end):
                for prefix, cp in alg.reduce(Path(c, path.start, x - path.start)).items():
                    middle = (prefix, Path(c, x, 1))
                    _add_reduced(alg, out, _unit(gen.source), middle, alg.run(c, x + 1, path.end), coeff * cp)
        return out
    if level == 3:
        w = _ambiguity(alg, 2, gen.key)
        c, s, e = w.key
        f = w.right_cuts[-2]
        head = Path(c, s, f - s)
        for x in range(f + 1, e):
            middle = (head, Path(c, f, x - f), Path(c, x, 1))
            _add_reduced(alg, out, _unit(gen.source), middle, alg.run(c, x + 1, e))
        return out
    raise DegreeUnsupported(f"closed form of φ exists up to level 3, asked for {level}")


def _last_window(alg: ToupieAlgebra, p: Path) -> tuple[int, int] | None:
    inside = alg.windows_in(p)
    return inside[-1] if inside else None


def eta_closed(alg: ToupieAlgebra, level: int, chain: Chain) -> Tensor:
    """η_level(1 ⊗ chain ⊗ 1) for level <= 3 without the recursion."""
    out = Tensor()
    if level != len(chain):
        raise DegreeMismatch(f"a level-{level} bar chain has {level} entries, got {len(chain)}")
    first, last = chain[0], chain[-1]
    c, start = first.branch, first.start
    if level == 1:
        for x in range(first.start, first.end):
            _add_reduced(alg, out, alg.run(c, start, x), generator_at(alg, 1, (c, x)), alg.run(c, x + 1, first.end))
        return out
    if level == 2:
        p = alg.concat(first, last)
        if p.start == 0 and p.end == alg.lengths[c] and alg.is_pivot(c):
            out.add_term((_unit(SOURCE), generator_at(alg, 2, (alg.pivot_row[c],)), _unit(SINK)), 1)
            return out
        window = _last_window(alg, p)
        if window is not None:
            ws, we = window
            _add_reduced(alg, out, alg.run(c, start, ws), generator_at(alg, 2, (c, ws, we)), alg.run(c, we, p.end))
        return out
    if level == 3:
        head = alg.concat(first, chain[1])
        window = _last_window(alg, head)
        if window is None:
            return out
        ws, we = window
        if not alg.is_irreducible(alg.run(c, we, last.end)):
            return out
        for w in ambiguities_in(alg, alg.run(c, ws, last.end), 2):
            _add_reduced(alg, out, alg.run(c, start, w.start), generator_at(alg, 3, w.key), alg.run(c, w.end, last.end))
        return out
    raise DegreeUnsupported(f"closed form of η exists up to level 3, asked for {level}")

