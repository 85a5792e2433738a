"""
Reduction system and ambiguities.

Pivot rules rewrite whole branches and cannot overlap anything, so every
ambiguity is a chain of overlapping monomial windows on a single branch.
An n-ambiguity is stored by its identity (branch, start, end); the left and
right factorizations are recomputed from the branch windows on demand.
"""

import logging
from dataclasses import dataclass

from .algebra import Element, Path, ToupieAlgebra, memoized
from .errors import AmbiguityMismatch, DegreeMismatch

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ReductionRule:
    tip: Path
    replacement: Element

    @property
    def is_monomial(self) -> bool:
        return not self.replacement


@dataclass(frozen=True, order=True)
class Ambiguity:
    branch: int
    start: int
    end: int
    n: int
    # offsets e_{-1} < e_0 < ... < e_n cutting the path into u_0, ..., u_n
    left_cuts: tuple[int, ...] = ()
    # offsets f_{-1} > f_0 > ... > f_n cutting the path into v_n, ..., v_0
    right_cuts: tuple[int, ...] = ()

    @property
    def path(self) -> Path:
        return Path(self.branch, self.start, self.end - self.start)

    @property
    def key(self) -> tuple[int, int, int]:
        return self.branch, self.start, self.end

    @property
    def factorization_left(self) -> list[Path]:
        """u_0, u_1, ..., u_n"""
        c = self.left_cuts
        return [Path(self.branch, c[i], c[i + 1] - c[i]) for i in range(len(c) - 1)]

    @property
    def factorization_right(self) -> list[Path]:
        """v_n, ..., v_1, v_0 in path order"""
        c = tuple(reversed(self.right_cuts))
        return [Path(self.branch, c[i], c[i + 1] - c[i]) for i in range(len(c) - 1)]

    def label(self) -> str:
        return f"amb({self.branch + 1},{self.start},{self.end})"


def reduction_system(alg: ToupieAlgebra) -> list[ReductionRule]:
    rules = []
    for c, windows in enumerate(alg.windows):
        for start, end in windows:
            rules.append(ReductionRule(Path(c, start, end - start), Element()))
    for i, pivot in enumerate(alg.pivots):
        rules.append(ReductionRule(alg.full(pivot), alg.pivot_tail(i)))
    return rules


def _left_chain(windows: tuple[tuple[int, int], ...], p: int, n: int) -> tuple[int, ...] | None:
    cuts = [p, p + 1]
    for _ in range(n):
        lo, hi = cuts[-2], cuts[-1]
        nxt = next(((s, e) for s, e in windows if s >= lo), None)
        if nxt is None or nxt[0] >= hi:
            return None
        cuts.append(nxt[1])
    return tuple(cuts)


def _right_chain(windows: tuple[tuple[int, int], ...], q: int, n: int) -> tuple[int, ...] | None:
    cuts = [q, q - 1]
    for _ in range(n):
        hi, lo = cuts[-2], cuts[-1]
        prev = next(((s, e) for s, e in reversed(windows) if e <= hi), None)
        if prev is None or prev[1] <= lo:
            return None
        cuts.append(prev[0])
    return tuple(cuts)


def _check_left_divisors(alg: ToupieAlgebra, branch: int, cuts: tuple[int, ...]) -> None:
    # u_i u_{i+1} ∈ I, and u_i d ∉ I for every proper left divisor d of u_{i+1}
    for i in range(1, len(cuts) - 1):
        lo, mid, hi = cuts[i - 1], cuts[i], cuts[i + 1]
        if not alg.contains_window(branch, lo, hi):
            raise AmbiguityMismatch(f"factor pair [{lo},{hi}) on branch {branch + 1} is not in I")
        for d_end in range(mid + 1, hi):
            if alg.contains_window(branch, lo, d_end):
                raise AmbiguityMismatch(f"factor [{mid},{hi}) on branch {branch + 1} is not minimal")


@memoized
def _ambiguities(alg: ToupieAlgebra, n: int) -> tuple[Ambiguity, ...]:
    found = []
    for c, windows in enumerate(alg.windows):
        if not windows:
            continue
        lefts = {}
        for p in range(alg.lengths[c]):
            cuts = _left_chain(windows, p, n)
            if cuts is not None:
                _check_left_divisors(alg, c, cuts)
                lefts[(cuts[0], cuts[-1])] = cuts
        rights = {}
        for q_ in range(1, alg.lengths[c] + 1):
            cuts = _right_chain(windows, q_, n)
            if cuts is not None:
                rights[(cuts[-1], cuts[0])] = cuts
        if set(lefts) != set(rights):
            raise AmbiguityMismatch(
                f"left and right {n}-ambiguities differ on branch {c + 1}: "
                f"{sorted(lefts)} vs {sorted(rights)}"
            )
        for (start, end), cuts in sorted(lefts.items()):
            found.append(Ambiguity(c, start, end, n, cuts, rights[(start, end)]))
    logger.debug("%d ambiguities of degree %d", len(found), n)
    return tuple(found)


def n_ambiguities(alg: ToupieAlgebra, n: int) -> list[Ambiguity]:
    """
    All n-ambiguities, ordered by (branch, start).

    Degree 1 gives the monomial relations themselves, which the resolution uses
    as its degree-two generators.
    """
    if n < 1:
        raise DegreeMismatch(f"ambiguities have degree >= 1, got {n}")
    return list(_ambiguities(alg, n))


def max_ambiguity_degree(alg: ToupieAlgebra) -> int:
    n = 2
    while _ambiguities(alg, n):
        n += 1
    return n


def ambiguities_in(alg: ToupieAlgebra, path: Path, n: int) -> list[Ambiguity]:
    """The n-ambiguities lying inside ``path``, left to right."""
    if path.is_trivial:
        return []
    return [
        w for w in _ambiguities(alg, n)
        if w.branch == path.branch and path.start <= w.start and w.end <= path.end
    ]


def full_ambiguities(alg: ToupieAlgebra, n: int) -> list[Ambiguity]:
    """₀(𝒜_n)_ω: the n-ambiguities running from the source to the sink."""
    return [w for w in _ambiguities(alg, n) if w.start == 0 and w.end == alg.lengths[w.branch]]
