"""Lie algebras as structure-constant tables over the rationals.

A ``LieAlgebra`` stores a sparse antisymmetric bracket table: only pairs
``(i, j)`` with ``i < j`` are kept, so antisymmetry holds by construction
and the Jacobi identity is the only thing left to check.  Basis indices
are 0-based internally; the default labels are ``e1..en``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Optional, Sequence

from .linalg import (
    Matrix,
    RowReducer,
    Scalar,
    Subspace,
    Vec,
    as_vec,
    invert,
    is_zero_vec,
    unit_vec,
    vec_add,
    vec_scale,
    zero_vec,
)


class NotLieAlgebraError(ValueError):
    """Raised when an operation requires the Jacobi identity but the
    table violates it."""


class NotDerivationError(ValueError):
    pass


class SingularMatrixError(ValueError):
    pass


JacobiDefect = tuple[int, int, int, Vec]


@dataclass(frozen=True)
class LieAlgebra:
    """Structure-constant table of a (candidate) Lie algebra.

    ``table`` maps ordered basis pairs (i, j), i < j, to the coordinate
    vector of [e_i, e_j]; missing pairs bracket to zero.  Construction is
    "raw": the Jacobi identity is not enforced, so the checker itself can
    be exercised on broken tables.  Use :meth:`validated` when the table
    is supposed to be a Lie algebra.
    """

    dim: int
    labels: tuple[str, ...]
    table: tuple[tuple[tuple[int, int], Vec], ...]

    @staticmethod
    def from_brackets(dim: int,
                      brackets: Mapping[tuple[int, int], Iterable[Scalar]],
                      labels: Sequence[str] | None = None) -> "LieAlgebra":
        if dim < 0:
            raise ValueError("dimension must be nonnegative")
        if labels is None:
            labels = tuple(f"e{i + 1}" for i in range(dim))
        else:
            labels = tuple(labels)
            if len(labels) != dim:
                raise ValueError("label count must equal dimension")
        entries = {}
        for (i, j), value in brackets.items():
            if not (0 <= i < j < dim):
                raise ValueError(f"bracket pair ({i}, {j}) must satisfy 0 <= i < j < dim")
            vec = as_vec(value)
            if len(vec) != dim:
                raise ValueError(f"bracket value for ({i}, {j}) has wrong length")
            if not is_zero_vec(vec):
                entries[(i, j)] = vec
        table = tuple(sorted(entries.items()))
        return LieAlgebra(dim, labels, table)

    def validated(self) -> "LieAlgebra":
        """Return self after checking Jacobi; raises NotLieAlgebraError
        with the violating triples otherwise."""
        defects = self.jacobi_defect()
        if defects:
            triples = ", ".join(f"({i + 1},{j + 1},{k + 1})" for i, j, k, _ in defects[:5])
            more = "" if len(defects) <= 5 else f" and {len(defects) - 5} more"
            raise NotLieAlgebraError(f"Jacobi identity fails at triples {triples}{more}")
        return self

    @cached_property
    def _map(self) -> dict[tuple[int, int], Vec]:
        return dict(self.table)

    def bracket_basis(self, i: int, j: int) -> Vec:
        """[e_i, e_j] for basis indices, any order."""
        if i == j:
            return zero_vec(self.dim)
        if i < j:
            return self._map.get((i, j), zero_vec(self.dim))
        v = self._map.get((j, i))
        return vec_scale(-1, v) if v is not None else zero_vec(self.dim)

    def bracket(self, x: Sequence[Scalar], y: Sequence[Scalar]) -> Vec:
        """Bilinear antisymmetric extension of the table."""
        xx, yy = as_vec(x), as_vec(y)
        if len(xx) != self.dim or len(yy) != self.dim:
            raise ValueError(f"vectors must have length {self.dim}")
        acc = [Fraction(0)] * self.dim
        for (i, j), vec in self.table:
            c = xx[i] * yy[j] - xx[j] * yy[i]
            if c:
                for k, v in enumerate(vec):
                    if v:
                        acc[k] += c * v
        return tuple(acc)

    def jacobi_defect(self) -> list[JacobiDefect]:
        """All basis triples i < j < k where the Jacobi identity fails,
        with their exact residual vectors.  Empty iff this is a Lie
        algebra."""
        out = []
        n = self.dim
        basis = [unit_vec(n, i) for i in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                vij = self.bracket_basis(i, j)
                if is_zero_vec(vij):
                    vij = None
                for k in range(j + 1, n):
                    res = zero_vec(n)
                    if vij is not None:
                        res = vec_add(res, self.bracket(vij, basis[k]))
                    vjk = self.bracket_basis(j, k)
                    if not is_zero_vec(vjk):
                        res = vec_add(res, self.bracket(vjk, basis[i]))
                    vki = self.bracket_basis(k, i)
                    if not is_zero_vec(vki):
                        res = vec_add(res, self.bracket(vki, basis[j]))
                    if not is_zero_vec(res):
                        out.append((i, j, k, res))
        return out

    def ad(self, x: Sequence[Scalar]) -> Matrix:
        """Matrix of y -> [x, y] (columns are images of basis vectors)."""
        xx = as_vec(x)
        if len(xx) != self.dim:
            raise ValueError(f"vector must have length {self.dim}")
        cols = [self.bracket(xx, unit_vec(self.dim, j)) for j in range(self.dim)]
        return Matrix.from_rows(cols, self.dim).transpose()

    def lower_central_series(self) -> "SeriesReport":
        """gamma_1 = g, gamma_{i+1} = [g, gamma_i], computed on subspaces."""
        self.validated()
        n = self.dim
        terms = [Subspace.full(n)]
        while True:
            prev = terms[-1]
            rows = []
            for i in range(n):
                for v in prev.basis_rows():
                    w = self.bracket(unit_vec(n, i), v)
                    if not is_zero_vec(w):
                        rows.append(w)
            nxt = Subspace.from_rows(rows, n)
            if nxt.dim == 0:
                terms.append(nxt)
                return SeriesReport(tuple(terms), True, len(terms) - 1)
            if nxt == prev:
                return SeriesReport(tuple(terms), False, None)
            terms.append(nxt)

    def center(self) -> Subspace:
        """{x : [x, e_i] = 0 for all i}; the nullspace of the stacked
        ad-action in the first argument."""
        n = self.dim
        red = RowReducer(n)
        # row for (j, k): sum_i x_i * c_{i j}^k = 0
        for j in range(n):
            for k in range(n):
                row = {}
                for i in range(n):
                    c = self.bracket_basis(i, j)[k]
                    if c:
                        row[i] = c
                if row:
                    red.add(row)
        return Subspace.from_rows(red.nullspace_rows(), n)

    def is_derivation(self, u: Matrix) -> bool:
        """Leibniz identity u[x,y] = [u x, y] + [x, u y] on all basis pairs."""
        if u.rows != self.dim or u.cols != self.dim:
            raise ValueError("endomorphism shape mismatch")
        n = self.dim
        for i in range(n):
            ui = u.col(i)
            for j in range(i + 1, n):
                lhs = u.apply(self.bracket_basis(i, j))
                rhs = vec_add(self.bracket(ui, unit_vec(n, j)),
                              self.bracket(unit_vec(n, i), u.col(j)))
                if lhs != rhs:
                    return False
        return True

    def leibniz_rows(self):
        """Sparse rows of the Leibniz system in the n^2 unknowns u[k][l]
        (row-major flat index k*n + l, u(e_l) = sum_k u[k][l] e_k).

        Yields one mapping per (pair, coordinate) equation:
        sum_l c_{ij}^l u[k][l] - sum_l u[l][i] c_{lj}^k - sum_l u[l][j] c_{il}^k = 0.
        """
        n = self.dim
        for i in range(n):
            for j in range(i + 1, n):
                cij = self.bracket_basis(i, j)
                for k in range(n):
                    row: dict[int, Fraction] = {}
                    for l in range(n):
                        if cij[l]:
                            row[k * n + l] = row.get(k * n + l, Fraction(0)) + cij[l]
                    for l in range(n):
                        clj = self.bracket_basis(l, j)[k]
                        if clj:
                            col = l * n + i
                            row[col] = row.get(col, Fraction(0)) - clj
                        cil = self.bracket_basis(i, l)[k]
                        if cil:
                            col = l * n + j
                            row[col] = row.get(col, Fraction(0)) - cil
                    row = {c: v for c, v in row.items() if v}
                    if row:
                        yield row

    def derivation_algebra(self) -> Subspace:
        """Solution space of the Leibniz system, as a subspace of the
        n^2-dimensional endomorphism space (row-major flattening)."""
        self.validated()
        n = self.dim
        red = RowReducer(n * n)
        for row in self.leibniz_rows():
            red.add(row)
        return Subspace.from_rows(red.nullspace_rows(), n * n)

    def semidirect_with_derivation(self, d: Matrix) -> "LieAlgebra":
        """Extend by a new generator acting as the derivation ``d``:
        same table plus [e_{n+1}, e_i] = d(e_i)."""
        if not self.is_derivation(d):
            raise NotDerivationError("the supplied endomorphism is not a derivation")
        n = self.dim
        brackets: dict[tuple[int, int], Vec] = {}
        for (i, j), vec in self.table:
            brackets[(i, j)] = vec + (Fraction(0),)
        for i in range(n):
            col = d.col(i)
            if not is_zero_vec(col):
                # stored pair (i, n) = [e_i, e_{n+1}] = -d(e_i)
                brackets[(i, n)] = vec_scale(-1, col) + (Fraction(0),)
        labels = self.labels + (f"e{n + 1}",)
        return LieAlgebra.from_brackets(n + 1, brackets, labels).validated()

    def change_of_basis(self, p: Matrix) -> "LieAlgebra":
        """The same algebra expressed in the basis given by the columns
        of the invertible matrix ``p``."""
        if p.rows != self.dim or p.cols != self.dim:
            raise ValueError("change of basis matrix shape mismatch")
        p_inv = invert(p)
        if p_inv is None:
            raise SingularMatrixError("change of basis matrix is singular")
        n = self.dim
        cols = [p.col(i) for i in range(n)]
        brackets = {}
        for i in range(n):
            for j in range(i + 1, n):
                w = self.bracket(cols[i], cols[j])
                if not is_zero_vec(w):
                    brackets[(i, j)] = p_inv.apply(w)
        return LieAlgebra.from_brackets(n, brackets, self.labels)

    def bracket_count(self) -> int:
        """Number of stored (nonzero) bracket pairs."""
        return len(self.table)

    def is_abelian(self) -> bool:
        return not self.table


@dataclass(frozen=True)
class SeriesReport:
    """Lower central series: terms gamma_1 > gamma_2 > ...; when the
    algebra is nilpotent the final term is the zero subspace and ``step``
    is the last index with a nonzero term."""

    terms: tuple[Subspace, ...]
    nilpotent: bool
    step: Optional[int]

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(t.dim for t in self.terms)
