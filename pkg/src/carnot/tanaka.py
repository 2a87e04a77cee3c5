"""Strata-preserving derivations and the graded prolongation tower.

Grading convention: the layers V_1..V_s of a stratification sit in
negative degrees -1..-s.  For k >= 0 the degree-k component g_k consists
of tuples of linear maps u_l : V_l -> (target of degree k - l), where a
negative-degree target is a layer and a nonnegative-degree target is the
previously computed component g_{k-l}, represented in its stored basis.
Membership in g_k is cut out by the Leibniz condition

    u([X, Y]) = [u(X), Y] + [X, u(Y)]

over all pairs of homogeneous basis vectors X, Y, where the bracket of a
nonnegative element w against a negative Y means applying w's stored
maps: [w, Y] = w(Y), recursively through the representation.  Degree 0
recovers exactly the layer-preserving (strata-preserving) derivations.

Everything is computed in an adapted basis in which each layer is a
coordinate block; results living in the original endomorphism space are
conjugated back at the boundary.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .grading import Stratification
from .liealg import LieAlgebra
from .linalg import (
    Matrix,
    RowReducer,
    Subspace,
    Vec,
    invert,
    is_zero_vec,
    solve_affine,
    zero_vec,
)


class ComponentNotComputedError(ValueError):
    pass


class MembershipError(ValueError):
    pass


@dataclass(frozen=True)
class AdaptedFrame:
    """An algebra re-expressed in a basis adapted to its stratification."""

    algebra: LieAlgebra
    stratification: Stratification
    adapted: Matrix          # rows are the adapted basis vectors
    cols: Matrix             # adapted vectors as columns
    cols_inv: Matrix
    graded: LieAlgebra       # the algebra in adapted coordinates
    weights: tuple[int, ...]  # layer weight of each adapted index (1..s)
    offsets: tuple[int, ...]  # start of each layer block; offsets[s] == dim

    @staticmethod
    def build(L: LieAlgebra, s: Stratification) -> "AdaptedFrame":
        if s.ambient_dim != L.dim:
            raise ValueError("stratification ambient dimension mismatch")
        rows = [row for v in s.layers for row in v.basis_rows()]
        adapted = Matrix.from_rows(rows, L.dim)
        cols = adapted.transpose()
        cols_inv = invert(cols)
        assert cols_inv is not None
        graded = L.change_of_basis(cols)
        weights: list[int] = []
        offsets = [0]
        for j, v in enumerate(s.layers):
            weights.extend([j + 1] * v.dim)
            offsets.append(offsets[-1] + v.dim)
        frame = AdaptedFrame(L, s, adapted, cols, cols_inv, graded,
                             tuple(weights), tuple(offsets))
        frame._check_graded()
        return frame

    def _check_graded(self) -> None:
        # [V_i, V_j] lands entirely in V_{i+j} for a valid stratification
        sdeg = self.step
        for (i, j), vec in self.graded.table:
            w = self.weights[i] + self.weights[j]
            for k, x in enumerate(vec):
                if x and (w > sdeg or self.weights[k] != w):
                    raise ValueError("transported table is not graded; invalid stratification")

    @property
    def dim(self) -> int:
        return self.algebra.dim

    @property
    def step(self) -> int:
        return self.stratification.step

    def layer_dim(self, l: int) -> int:
        if 1 <= l <= self.step:
            return self.offsets[l] - self.offsets[l - 1]
        return 0

    def layer_slice(self, l: int) -> slice:
        return slice(self.offsets[l - 1], self.offsets[l])


@dataclass(frozen=True)
class HomElement:
    """An element of g_k: one matrix block per source layer.

    ``blocks[l-1]`` maps layer-l coordinates to coordinates of the
    degree-(k-l) target (layer coordinates when k-l < 0, stored-basis
    coordinates of the computed component when k-l >= 0).
    """

    degree: int
    blocks: tuple[Matrix, ...]

    def flatten(self) -> Vec:
        return tuple(x for b in self.blocks for x in b.flatten())

    def is_zero(self) -> bool:
        return all(b.is_zero() for b in self.blocks)

    def scaled(self, c) -> "HomElement":
        return HomElement(self.degree, tuple(b.scaled(c) for b in self.blocks))

    def __add__(self, other: "HomElement") -> "HomElement":
        if self.degree != other.degree:
            raise ValueError("degree mismatch")
        return HomElement(self.degree, tuple(a + b for a, b in zip(self.blocks, other.blocks)))


def _block_shapes(frame: AdaptedFrame, k: int, dims: Sequence[int]) -> list[tuple[int, int]]:
    shapes = []
    for l in range(1, frame.step + 1):
        t = k - l
        td = frame.layer_dim(-t) if t < 0 else dims[t]
        shapes.append((td, frame.layer_dim(l)))
    return shapes


def _zero_element(frame: AdaptedFrame, k: int, dims: Sequence[int]) -> HomElement:
    return HomElement(k, tuple(Matrix.zeros(r, c) for r, c in _block_shapes(frame, k, dims)))


def _element_from_flat(frame: AdaptedFrame, k: int, dims: Sequence[int], flat: Vec) -> HomElement:
    blocks = []
    pos = 0
    for r, c in _block_shapes(frame, k, dims):
        blocks.append(Matrix.from_flat(flat[pos:pos + r * c], r, c))
        pos += r * c
    return HomElement(k, tuple(blocks))


def _solve_component(frame: AdaptedFrame, k: int,
                     bases: Sequence[Sequence[HomElement]],
                     dims: Sequence[int]) -> list[HomElement]:
    """Nullspace of the degree-k Leibniz system, as HomElements.

    ``bases``/``dims`` describe the previously computed components
    g_0..g_{k-1} (both empty for k = 0).
    """
    n = frame.dim
    s = frame.step
    shapes = _block_shapes(frame, k, dims)
    offsets = [0]
    for r, c in shapes:
        offsets.append(offsets[-1] + r * c)
    total = offsets[-1]
    if total == 0:
        return []

    def unk(l: int, r: int, c: int) -> int:
        return offsets[l - 1] + r * shapes[l - 1][1] + c

    def target_dim(t: int) -> int:
        return frame.layer_dim(-t) if t < 0 else dims[t]

    def action(t: int, r: int, b: int) -> Vec:
        """Home-coordinates of [w, e_b] for w the r-th generator of the
        degree-t space; the result has degree t - weight(b)."""
        j = frame.weights[b]
        if t < 0:
            g = frame.offsets[-t - 1] + r
            full = frame.graded.bracket_basis(g, b)
            home_layer = -t + j
            if home_layer > s:
                return ()
            return full[frame.layer_slice(home_layer)]
        w = bases[t][r]
        block = w.blocks[j - 1]
        pos = b - frame.offsets[j - 1]
        return tuple(block.entries[q][pos] for q in range(block.rows))

    red = RowReducer(total)
    weights = frame.weights
    for a in range(n):
        i = weights[a]
        pos_a = a - frame.offsets[i - 1]
        for b in range(a + 1, n):
            j = weights[b]
            pos_b = b - frame.offsets[j - 1]
            h = k - i - j
            hd = target_dim(h) if h >= -s else 0
            if hd == 0:
                continue
            rows: list[dict[int, Fraction]] = [dict() for _ in range(hd)]
            # u([e_a, e_b]): the bracket is homogeneous of weight i+j
            if i + j <= s:
                z = frame.graded.bracket_basis(a, b)
                l = i + j
                zoff = frame.offsets[l - 1]
                for c in range(frame.layer_dim(l)):
                    zc = z[zoff + c]
                    if zc:
                        for q in range(hd):
                            col = unk(l, q, c)
                            rows[q][col] = rows[q].get(col, Fraction(0)) + zc
            # -[u(e_a), e_b]
            for r in range(target_dim(k - i)):
                val = action(k - i, r, b)
                col = unk(i, r, pos_a)
                for q in range(hd):
                    if val[q]:
                        rows[q][col] = rows[q].get(col, Fraction(0)) - val[q]
            # +[u(e_b), e_a]  (= -[e_a, u(e_b)])
            for r in range(target_dim(k - j)):
                val = action(k - j, r, a)
                col = unk(j, r, pos_b)
                for q in range(hd):
                    if val[q]:
                        rows[q][col] = rows[q].get(col, Fraction(0)) + val[q]
            for row in rows:
                row = {c: v for c, v in row.items() if v}
                if row:
                    red.add(row)
    sol = Subspace.from_rows(red.nullspace_rows(), total)
    return [_element_from_flat(frame, k, dims, flat) for flat in sol.basis_rows()]


def hom0_to_endo(frame: AdaptedFrame, el: HomElement) -> Matrix:
    """A degree-0 element as an endomorphism in the original basis."""
    if el.degree != 0:
        raise ValueError("only degree-0 elements are endomorphisms")
    n = frame.dim
    rows = [[Fraction(0)] * n for _ in range(n)]
    for l in range(1, frame.step + 1):
        off = frame.offsets[l - 1]
        block = el.blocks[l - 1]
        for r in range(block.rows):
            for c in range(block.cols):
                rows[off + r][off + c] = block.entries[r][c]
    adapted_endo = Matrix.from_rows(rows, n)
    return frame.cols @ adapted_endo @ frame.cols_inv


def grading_element(frame: AdaptedFrame) -> HomElement:
    """The grading derivation D as a degree-0 element (j times the
    identity on layer j)."""
    blocks = []
    for l in range(1, frame.step + 1):
        d = frame.layer_dim(l)
        blocks.append(Matrix.identity(d).scaled(l))
    return HomElement(0, tuple(blocks))


def degree_zero_derivations(L: LieAlgebra, s: Stratification) -> Subspace:
    """The strata-preserving derivations, as a subspace of the
    n^2-dimensional endomorphism space in the original basis."""
    frame = AdaptedFrame.build(L, s)
    comps = _solve_component(frame, 0, [], [])
    n = L.dim
    rows = [hom0_to_endo(frame, el).flatten() for el in comps]
    return Subspace.from_rows(rows, n * n)


@dataclass(frozen=True)
class ProlongationResult:
    """Computed prolongation components g_0..g_K with witness bases.

    ``finite`` is True when some component vanished (every later one
    vanishes too, so computation stops there) and None when the cap was
    reached with the last component still nonzero.
    """

    dims: tuple[int, ...]
    finite: Optional[bool]
    bases: tuple[tuple[HomElement, ...], ...]
    frame: AdaptedFrame

    def component_dim(self, t: int) -> int:
        if t < 0:
            return self.frame.layer_dim(-t)
        if t < len(self.dims):
            return self.dims[t]
        if self.finite:
            return 0
        raise ComponentNotComputedError(f"degree {t} not computed (cap {len(self.dims) - 1})")

    def basis(self, t: int) -> tuple[HomElement, ...]:
        if 0 <= t < len(self.bases):
            return self.bases[t]
        if self.finite:
            return ()
        raise ComponentNotComputedError(f"degree {t} not computed (cap {len(self.bases) - 1})")

    def coordinates_of(self, el: HomElement) -> Vec:
        """Coordinates of ``el`` in the stored basis of its degree;
        raises MembershipError when it lies outside the component."""
        basis = self.basis(el.degree)
        flat = el.flatten()
        if not basis:
            if not is_zero_vec(flat):
                raise MembershipError(f"nonzero element of vanishing component g_{el.degree}")
            return ()
        cols = Matrix.from_rows([b.flatten() for b in basis], len(flat)).transpose()
        sol = solve_affine(cols, flat)
        if sol is None:
            raise MembershipError(f"element does not lie in the computed g_{el.degree}")
        return sol.particular

    def _dims_view(self, upto: int) -> list[int]:
        return [self.component_dim(t) for t in range(upto + 1)]

    def _apply_value(self, w: HomElement, deg: int, coords: Vec) -> tuple[int, Vec]:
        """[w, xi] for xi of degree ``deg`` given by coordinates (layer
        coordinates when deg < 0, basis coordinates when deg >= 0)."""
        out_deg = w.degree + deg
        if deg < 0:
            return out_deg, w.blocks[-deg - 1].apply(coords)
        acc = _zero_element(self.frame, out_deg, self._dims_view(max(out_deg, 0)))
        for r, cr in enumerate(coords):
            if cr:
                acc = acc + self.bracket(w, self.basis(deg)[r]).scaled(cr)
        return out_deg, self.coordinates_of(acc)

    def bracket(self, u: HomElement, v: HomElement) -> HomElement:
        """The prolongation bracket [u, v](X) = [u, [v, X]] - [v, [u, X]]
        for nonnegative u, v; the result is checked to lie in the
        computed component of degree deg(u) + deg(v)."""
        if u.degree < 0 or v.degree < 0:
            raise ValueError("both elements must have nonnegative degree")
        K = u.degree + v.degree
        dims_view = self._dims_view(max(K, 0))
        frame = self.frame
        blocks = []
        for l in range(1, frame.step + 1):
            td = frame.layer_dim(-(K - l)) if K - l < 0 else dims_view[K - l]
            cols = []
            for c in range(frame.layer_dim(l)):
                x = tuple(Fraction(1) if q == c else Fraction(0)
                          for q in range(frame.layer_dim(l)))
                d1, c1 = self._apply_value(v, -l, x)
                _, val1 = self._apply_value(u, d1, c1)
                d2, c2 = self._apply_value(u, -l, x)
                _, val2 = self._apply_value(v, d2, c2)
                col = tuple(a - b for a, b in zip(val1, val2))
                cols.append(col if col else zero_vec(td))
            if td == 0:
                blocks.append(Matrix.zeros(0, frame.layer_dim(l)))
            else:
                blocks.append(Matrix.from_rows(cols, td).transpose())
        result = HomElement(K, tuple(blocks))
        self.coordinates_of(result)  # membership check
        return result


def prolong(L: LieAlgebra, s: Stratification, k_max: int = 6) -> ProlongationResult:
    """Compute g_0, g_1, ... up to degree ``k_max``, stopping early when
    a component vanishes (all later components vanish too)."""
    if k_max < 0:
        raise ValueError("k_max must be nonnegative")
    frame = AdaptedFrame.build(L, s)
    dims: list[int] = []
    bases: list[tuple[HomElement, ...]] = []
    for k in range(k_max + 1):
        comps = _solve_component(frame, k, bases, dims)
        dims.append(len(comps))
        bases.append(tuple(comps))
        if not comps:
            return ProlongationResult(tuple(dims), True, tuple(bases), frame)
    return ProlongationResult(tuple(dims), None, tuple(bases), frame)


def prolongation_bracket(result: ProlongationResult, u: HomElement, v: HomElement) -> HomElement:
    return result.bracket(u, v)


@dataclass(frozen=True)
class RigidityVerdict:
    """Infinitesimal rigidity report.

    ``infinitesimally_ultrarigid`` means the strata-preserving
    derivations reduce to multiples of the grading derivation; the
    discrete part of the automorphism group is not decided here.  When
    the algebra is nonabelian and g_0 is one-dimensional,
    ``g1_trivial`` records the direct computation that g_1
    vanishes (so the whole prolongation is g + g_0).
    """

    g0_dim: int
    infinitesimally_ultrarigid: bool
    g1_trivial: Optional[bool]


def ultrarigidity_check(L: LieAlgebra, s: Stratification) -> RigidityVerdict:
    frame = AdaptedFrame.build(L, s)
    comps0 = _solve_component(frame, 0, [], [])
    g0_dim = len(comps0)
    ultra = g0_dim == 1
    lemma: Optional[bool] = None
    if ultra and not L.is_abelian():
        comps1 = _solve_component(frame, 1, [tuple(comps0)], [g0_dim])
        lemma = len(comps1) == 0
    return RigidityVerdict(g0_dim, ultra, lemma)
