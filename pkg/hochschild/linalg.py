"""
Exact rational linear algebra.

Matrices are stored sparsely as ``{row: {col: value}}`` with values in ``QQ``;
rank and row reduction are delegated to sympy's ``DomainMatrix``.
"""

import logging
from typing import Any, Iterable

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

logger = logging.getLogger(__name__)

Coeff = Any  # element of QQ
Vector = dict[int, Coeff]


def q(value) -> Coeff:
    """Coerce an int / QQ element / sympy Rational into QQ."""
    return QQ.convert(value)


def add_into(target: Vector, source: Vector, factor: Coeff = 1) -> None:
    for key, value in source.items():
        new = target.get(key, QQ(0)) + value * factor
        if new == 0:
            target.pop(key, None)
        else:
            target[key] = new


def _entries(dm: DomainMatrix) -> dict[int, Vector]:
    rep = dm.to_sparse().rep
    return {i: dict(row) for i, row in rep.items() if row}


class RationalMatrix:
    def __init__(self, nrows: int, ncols: int, rows: dict[int, Vector] | None = None) -> None:
        self.nrows = nrows
        self.ncols = ncols
        self.rows: dict[int, Vector] = {}
        for i, row in (rows or {}).items():
            for j, value in row.items():
                self.add(i, j, value)

    @classmethod
    def from_columns(cls, nrows: int, columns: list[Vector]) -> "RationalMatrix":
        m = cls(nrows, len(columns))
        for j, column in enumerate(columns):
            for i, value in column.items():
                m.add(i, j, value)
        return m

    @classmethod
    def from_rows(cls, ncols: int, rows: list[Vector]) -> "RationalMatrix":
        return cls(ncols=ncols, nrows=len(rows), rows=dict(enumerate(rows)))

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def add(self, i: int, j: int, value) -> None:
        if not (0 <= i < self.nrows and 0 <= j < self.ncols):
            raise IndexError(f"entry ({i}, {j}) outside {self.shape}")
        row = self.rows.setdefault(i, {})
        new = row.get(j, QQ(0)) + q(value)
        if new == 0:
            row.pop(j, None)
            if not row:
                del self.rows[i]
        else:
            row[j] = new

    def get(self, i: int, j: int) -> Coeff:
        return self.rows.get(i, {}).get(j, QQ(0))

    def column(self, j: int) -> Vector:
        return {i: row[j] for i, row in self.rows.items() if j in row}

    def columns(self) -> list[Vector]:
        cols: list[Vector] = [{} for _ in range(self.ncols)]
        for i, row in self.rows.items():
            for j, value in row.items():
                cols[j][i] = value
        return cols

    def is_zero(self) -> bool:
        return not self.rows

    def to_domain(self) -> DomainMatrix:
        return DomainMatrix({i: dict(row) for i, row in self.rows.items()}, self.shape, QQ)

    def transpose(self) -> "RationalMatrix":
        t = RationalMatrix(self.ncols, self.nrows)
        for i, row in self.rows.items():
            for j, value in row.items():
                t.rows.setdefault(j, {})[i] = value
        return t

    def hstack(self, other: "RationalMatrix") -> "RationalMatrix":
        if other.nrows != self.nrows:
            raise ValueError("hstack needs equal row counts")
        m = RationalMatrix(self.nrows, self.ncols + other.ncols, self.rows)
        for i, row in other.rows.items():
            for j, value in row.items():
                m.rows.setdefault(i, {})[self.ncols + j] = value
        return m

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.ncols != other.nrows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        if self.is_zero() or other.is_zero():
            return RationalMatrix(self.nrows, other.ncols)
        product = self.to_domain() * other.to_domain()
        return RationalMatrix(self.nrows, other.ncols, _entries(product))

    def __sub__(self, other: "RationalMatrix") -> "RationalMatrix":
        if other.shape != self.shape:
            raise ValueError(f"cannot subtract {other.shape} from {self.shape}")
        m = RationalMatrix(self.nrows, self.ncols, self.rows)
        for i, row in other.rows.items():
            for j, value in row.items():
                m.add(i, j, -value)
        return m

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        return self.shape == other.shape and self.rows == other.rows

    def __repr__(self) -> str:
        nnz = sum(len(r) for r in self.rows.values())
        return f"RationalMatrix({self.nrows}x{self.ncols}, nnz={nnz})"

    # ─── Reductions ─────────────────────────────────────────────

    def rref(self) -> tuple[list[Vector], tuple[int, ...]]:
        """Reduced rows (nonzero ones, in pivot order) and pivot columns."""
        if self.is_zero():
            return [], ()
        reduced, pivots = self.to_domain().rref()
        entries = _entries(reduced)
        return [entries[i] for i in range(len(pivots))], tuple(pivots)

    def rank(self) -> int:
        if self.is_zero():
            return 0
        rank = self.to_domain().rank()
        logger.debug("rank of %r is %d", self, rank)
        return rank

    def nullspace(self) -> list[Vector]:
        """Basis of {x : Mx = 0}, one vector per free column."""
        reduced, pivots = self.rref()
        pivot_set = set(pivots)
        basis = []
        for free in range(self.ncols):
            if free in pivot_set:
                continue
            vec: Vector = {free: QQ(1)}
            for row, pivot in zip(reduced, pivots):
                value = row.get(free)
                if value is not None and value != 0:
                    vec[pivot] = -value
            basis.append(vec)
        return basis

    def solve(self, targets: Iterable[Vector]) -> list[Vector | None]:
        """
        Solve M x = t for every target column at once.
        Returns ``None`` for inconsistent targets.
        """
        targets = list(targets)
        if not targets:
            return []
        aug = self.hstack(RationalMatrix.from_columns(self.nrows, targets))
        reduced, pivots = aug.rref()
        solutions: list[Vector | None] = []
        for k in range(len(targets)):
            col = self.ncols + k
            x: Vector = {}
            ok = True
            for row, pivot in zip(reduced, pivots):
                value = row.get(col)
                if value is None or value == 0:
                    continue
                if pivot >= self.ncols:
                    ok = False
                    break
                x[pivot] = value
            solutions.append(x if ok else None)
        return solutions


def rref_rows(rows: list[Vector], ncols: int) -> tuple[list[Vector], int]:
    """Standard RREF of a list of sparse rows; empty input gives ([], 0)."""
    if not rows:
        return [], 0
    reduced, pivots = RationalMatrix.from_rows(ncols, rows).rref()
    return reduced, len(pivots)


class Projector:
    """
    Coordinates with respect to ``basis`` modulo ``span(image)``.

    ``basis`` must stay independent modulo ``span(image)``; ``image`` itself may
    be redundant. ``project`` raises ``ValueError`` for vectors outside the span.
    """

    def __init__(self, dim: int, basis: list[Vector], image: list[Vector]) -> None:
        self.dim = dim
        self.k = len(basis)
        self.matrix = RationalMatrix.from_columns(dim, basis + image)
        self.image_rank = RationalMatrix.from_columns(dim, image).rank()

    def is_independent(self) -> bool:
        return self.matrix.rank() == self.k + self.image_rank

    def project_many(self, vectors: list[Vector]) -> list[Vector]:
        out = []
        for vec, sol in zip(vectors, self.matrix.solve(vectors)):
            if sol is None:
                raise ValueError(f"vector {vec} is outside the projector span")
            out.append({j: c for j, c in sol.items() if j < self.k})
        return out

    def project(self, vector: Vector) -> Vector:
        return self.project_many([vector])[0]
