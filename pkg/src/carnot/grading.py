"""Stratifications, dilations, filtrations and the nilpotentisation.

A stratification splits a nilpotent algebra into layers
``V_1 + ... + V_s`` (direct sum) with ``[V_j, V_1] = V_{j+1}``; the first
layer then generates everything and the grading derivation D acts as
multiplication by j on V_j.

Stratifiability is decided exactly: an algebra is stratifiable iff there
is a derivation d with (d - id)(g) contained in [g, g].  The grading
derivation of any stratification is such a d.  Conversely such a d
preserves the lower central series and acts as i on gamma_i/gamma_{i+1},
so its eigenvalues are exactly 1..s; the generalized eigenspaces
W_j = ker((d - j)^n) satisfy [W_a, W_b] in W_{a+b} (Leibniz binomial
identity) and gamma_i = W_i + gamma_{i+1}, whence comparing the
W_{j+1}-components of gamma_{j+1} = [g, gamma_j] gives
[W_1, W_j] = W_{j+1}: the W_j form a stratification.  This turns an
existence question over all gradings into one affine-linear feasibility
problem over the rationals.  Since the data are rational and feasibility
of a linear system does not change under field extension, the verdict
over the rationals agrees with the verdict over the reals.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional, Sequence

from .liealg import LieAlgebra
from .linalg import (
    Matrix,
    Scalar,
    Subspace,
    Vec,
    invert,
    is_zero_vec,
    nullspace,
    quotient_basis,
    rat,
    solve_affine_rows,
    unit_vec,
)


class StratificationError(ValueError):
    """Base class; each invariant violation has its own subclass."""


class NotDirectSumError(StratificationError):
    pass


class LayerGenerationError(StratificationError):
    pass


class TrivialTopLayerError(StratificationError):
    pass


class SmallFirstLayerError(StratificationError):
    pass


class NotBracketGeneratingError(ValueError):
    pass


class NotNilpotentError(ValueError):
    pass


@dataclass(frozen=True)
class Stratification:
    """Validated layer decomposition; construct via verify_stratification."""

    layers: tuple[Subspace, ...]

    @property
    def step(self) -> int:
        return len(self.layers)

    @property
    def ambient_dim(self) -> int:
        return self.layers[0].ambient_dim

    @property
    def layer_dims(self) -> tuple[int, ...]:
        return tuple(v.dim for v in self.layers)


@dataclass(frozen=True)
class Filtration:
    """Increasing chain L_1 <= L_2 <= ... <= L_s = whole space."""

    terms: tuple[Subspace, ...]

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(t.dim for t in self.terms)


def _bracket_span(L: LieAlgebra, a: Subspace, b: Subspace) -> Subspace:
    rows = []
    for x in a.basis_rows():
        for y in b.basis_rows():
            w = L.bracket(x, y)
            if not is_zero_vec(w):
                rows.append(w)
    return Subspace.from_rows(rows, L.dim)


def verify_stratification(L: LieAlgebra, layers: Sequence[Subspace]) -> Stratification:
    """Check the stratification axioms and return the validated object.

    Reports the first violated condition as a distinct error type:
    direct sum, generation [V_j, V_1] = V_{j+1}, V_s nonzero, dim V_1 >= 2.
    """
    L.validated()
    if not layers:
        raise StratificationError("at least one layer required")
    n = L.dim
    for v in layers:
        if v.ambient_dim != n:
            raise StratificationError("layer ambient dimension mismatch")
    total = sum(v.dim for v in layers)
    joined = layers[0]
    for v in layers[1:]:
        joined = joined + v
    if total != n or joined.dim != n:
        raise NotDirectSumError(
            f"layers do not form a direct sum decomposition: dims sum to {total}, span has dim {joined.dim}, ambient is {n}")
    s = len(layers)
    for j in range(s):
        generated = _bracket_span(L, layers[j], layers[0])
        expected = layers[j + 1] if j + 1 < s else Subspace.zero(n)
        if generated != expected:
            raise LayerGenerationError(
                f"[V_{j + 1}, V_1] != V_{j + 2}: generated dim {generated.dim}, expected dim {expected.dim}")
    if layers[-1].dim == 0:
        raise TrivialTopLayerError("top layer V_s is zero")
    if layers[0].dim < 2:
        raise SmallFirstLayerError("first layer must have dimension at least 2")
    return Stratification(tuple(layers))


def coordinate_layers(n: int, ranges: Sequence[tuple[int, int]]) -> list[Subspace]:
    """Layers spanned by basis vectors, from 1-based inclusive index ranges."""
    out = []
    for lo, hi in ranges:
        if not (1 <= lo <= hi <= n):
            raise ValueError(f"range {lo}..{hi} out of 1..{n}")
        out.append(Subspace.from_rows([unit_vec(n, i) for i in range(lo - 1, hi)], n))
    return out


def _block_scalar_map(s: Stratification, factors: Sequence[Fraction]) -> Matrix:
    """The map acting as factors[j] on layer j, in ambient coordinates."""
    n = s.ambient_dim
    adapted = [row for v in s.layers for row in v.basis_rows()]
    p_cols = Matrix.from_rows(adapted, n).transpose()
    p_inv = invert(p_cols)
    assert p_inv is not None  # layers form a direct sum
    diag_rows = []
    scale = []
    for j, v in enumerate(s.layers):
        scale.extend([factors[j]] * v.dim)
    for i in range(n):
        diag_rows.append(tuple(scale[i] if k == i else Fraction(0) for k in range(n)))
    diag = Matrix.from_rows(diag_rows, n)
    return p_cols @ diag @ p_inv


def grading_derivation(s: Stratification) -> Matrix:
    """D acting as multiplication by j on V_j."""
    return _block_scalar_map(s, [Fraction(j + 1) for j in range(s.step)])


def dilation(s: Stratification, lam: Scalar) -> Matrix:
    """The algebra dilation acting as lam^j on V_j; an automorphism for
    every nonzero lam."""
    q = rat(lam)
    if q == 0:
        raise ValueError("dilation factor must be nonzero")
    return _block_scalar_map(s, [q ** (j + 1) for j in range(s.step)])


def homogeneous_dimension(s: Stratification) -> int:
    return sum((j + 1) * v.dim for j, v in enumerate(s.layers))


def filtration_from_horizontal(L: LieAlgebra, h: Subspace) -> Filtration:
    """L_1 = h, L_{i+1} = L_i + [h, L_i], until the whole space is reached.

    Raises NotBracketGeneratingError when the recursion stabilizes below
    the full dimension.
    """
    L.validated()
    if h.ambient_dim != L.dim:
        raise ValueError("horizontal space ambient dimension mismatch")
    terms = [h]
    while terms[-1].dim < L.dim:
        prev = terms[-1]
        nxt = prev + _bracket_span(L, h, prev)
        if nxt == prev:
            raise NotBracketGeneratingError(
                f"horizontal space generates only a dim-{prev.dim} subalgebra of the dim-{L.dim} algebra")
        terms.append(nxt)
    return Filtration(tuple(terms))


class GrResult(NamedTuple):
    algebra: LieAlgebra
    adapted_basis: Matrix  # rows are the adapted basis vectors
    stratification: Stratification


def nilpotentisation(L: LieAlgebra, h: Subspace) -> GrResult:
    """The associated graded algebra of the filtration generated by ``h``.

    An adapted basis is built level by level (canonical basis of L_1,
    then lowest-pivot completions of each L_i inside L_{i+1}); brackets of
    representatives of weights i and j are projected to the weight-(i+j)
    coordinates, discarding lower filtration levels.  The result carries
    the induced stratification by weight and is returned together with
    the adapted basis.
    """
    filt = filtration_from_horizontal(L, h)
    s = len(filt.terms)
    reps: list[Vec] = list(filt.terms[0].basis_rows())
    weights: list[int] = [1] * filt.terms[0].dim
    for i in range(1, s):
        new = quotient_basis(filt.terms[i - 1], filt.terms[i])
        reps.extend(new)
        weights.extend([i + 1] * len(new))
    n = L.dim
    adapted = Matrix.from_rows(reps, n)
    a_cols = adapted.transpose()
    a_inv = invert(a_cols)
    assert a_inv is not None
    brackets: dict[tuple[int, int], Vec] = {}
    for a in range(n):
        for b in range(a + 1, n):
            w = weights[a] + weights[b]
            z = L.bracket(reps[a], reps[b])
            if is_zero_vec(z):
                continue
            coords = a_inv.apply(z)
            # brackets respect the filtration: nothing above weight w
            assert all(coords[k] == 0 for k in range(n) if weights[k] > w)
            if w > s:
                continue
            graded = tuple(coords[k] if weights[k] == w else Fraction(0) for k in range(n))
            if not is_zero_vec(graded):
                brackets[(a, b)] = graded
    gr = LieAlgebra.from_brackets(n, brackets).validated()
    ranges = []
    start = 1
    for term_dim in _level_dims(filt):
        ranges.append((start, start + term_dim - 1))
        start += term_dim
    strat = verify_stratification(gr, coordinate_layers(n, ranges))
    return GrResult(gr, adapted, strat)


def _level_dims(filt: Filtration) -> list[int]:
    dims = [filt.terms[0].dim]
    for prev, cur in zip(filt.terms, filt.terms[1:]):
        dims.append(cur.dim - prev.dim)
    return dims


@dataclass(frozen=True)
class StratifiabilityVerdict:
    stratifiable: bool
    witness: Optional[Matrix]
    derived_stratification: Optional[Stratification]


def is_stratifiable(L: LieAlgebra) -> StratifiabilityVerdict:
    """Decide stratifiability via exact affine feasibility.

    Searches for a derivation d with (d - id)(e_i) in [g, g] for every
    basis vector.  When feasible, the generalized eigenspaces of a
    witness for the forced integer eigenvalues 1..s are extracted and
    validated as a stratification; the returned witness is the grading
    derivation of that stratification (the semisimple part).
    """
    series = L.lower_central_series()
    if not series.nilpotent:
        raise NotNilpotentError("only nilpotent algebras can be stratified")
    n = L.dim
    gamma2 = series.terms[1] if len(series.terms) > 1 else Subspace.zero(n)
    functionals = gamma2.quotient_functionals()
    rows = []
    for row in L.leibniz_rows():
        rows.append(row)
    for i in range(n):
        for f in functionals:
            row = {k * n + i: f[k] for k in range(n) if f[k]}
            row[n * n] = f[i]  # rhs: the constraint is f(d(e_i)) = f(e_i)
            rows.append(row)
    sol = solve_affine_rows(rows, n * n)
    if sol is None:
        return StratifiabilityVerdict(False, None, None)
    delta = Matrix.from_flat(sol.particular, n, n)
    s = series.step
    assert s is not None
    layers = []
    for j in range(1, s + 1):
        expected = series.terms[j - 1].dim - series.terms[j].dim
        power = delta - Matrix.identity(n).scaled(j)
        exponent = 1
        ker = nullspace(power)
        while ker.dim < expected and exponent < n:
            power = power @ power
            exponent *= 2
            ker = nullspace(power)
        layers.append(ker)
    try:
        strat = verify_stratification(L, layers)
    except (SmallFirstLayerError, TrivialTopLayerError):
        # ambient dimension 0 or 1: feasible, but below the
        # nondegeneracy floor for stratification objects
        return StratifiabilityVerdict(True, delta, None)
    return StratifiabilityVerdict(True, grading_derivation(strat), strat)
