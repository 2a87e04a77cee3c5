import random
from fractions import Fraction

import pytest

from carnot.linalg import (
    Matrix,
    RowReducer,
    Subspace,
    invert,
    mat_pow,
    membership,
    nullspace,
    quotient_basis,
    rat,
    rref,
    solve_affine,
    subspace_intersect,
    subspace_sum,
    unit_vec,
    zero_vec,
)

F = Fraction


def M(rows, cols=None):
    return Matrix.from_rows(rows, cols)


def span(rows, n):
    return Subspace.from_rows(rows, n)


def test_rat_rejects_floats():
    with pytest.raises(TypeError):
        rat(0.5)
    assert rat("3/7") == F(3, 7)
    assert rat(-4) == F(-4)


def test_rref_proportional_rows():
    r, rank = rref(M([[2, 4], [1, 2]]))
    assert r == M([[1, 2], [0, 0]])
    assert rank == 1


def test_rref_identity():
    r, rank = rref(Matrix.identity(3))
    assert r == Matrix.identity(3)
    assert rank == 3


def test_rref_full_rank_2x2():
    # hand elimination: R2 -= 3 R1 -> [[1,2],[0,-2]] -> normalize/back-substitute -> identity
    r, rank = rref(M([[1, 2], [3, 4]]))
    assert r == Matrix.identity(2)
    assert rank == 2


def test_rref_idempotent_on_seeded_randoms():
    rng = random.Random(11)
    for _ in range(25):
        rows = rng.randint(1, 5)
        cols = rng.randint(1, 5)
        m = M([[F(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(cols)]
               for _ in range(rows)], cols)
        r1, rank1 = rref(m)
        r2, rank2 = rref(r1)
        assert r1 == r2 and rank1 == rank2


def test_nullspace_identity_and_zero():
    assert nullspace(Matrix.identity(3)).dim == 0
    z = nullspace(Matrix.zeros(2, 2))
    assert z == Subspace.full(2)


def test_nullspace_single_row():
    ns = nullspace(M([[1, 1, 0]]))
    assert ns.dim == 2
    assert ns.contains([1, -1, 0])
    assert ns.contains([0, 0, 1])
    m = M([[1, 1, 0]])
    for row in ns.basis_rows():
        assert m.apply(row) == (F(0),)


def test_subspace_sum_idempotent_and_unit_spans():
    a = span([unit_vec(2, 0)], 2)
    b = span([unit_vec(2, 1)], 2)
    assert subspace_sum(a, a) == a
    assert subspace_sum(a, b) == Subspace.full(2)


def test_subspace_sum_diagonal_spans():
    # RREF of [[1,1,0],[1,-1,0]] is [[1,0,0],[0,1,0]]
    a = span([[1, 1, 0]], 3)
    b = span([[1, -1, 0]], 3)
    assert a + b == span([unit_vec(3, 0), unit_vec(3, 1)], 3)


def test_intersect_trivial_cases():
    a = span([[1, 2], [0, 1]], 2)
    assert subspace_intersect(a, Subspace.full(2)) == a
    e1 = span([unit_vec(2, 0)], 2)
    e2 = span([unit_vec(2, 1)], 2)
    assert subspace_intersect(e1, e2).dim == 0


def test_intersect_overlapping_planes():
    a = span([unit_vec(3, 0), unit_vec(3, 1)], 3)
    b = span([unit_vec(3, 1), unit_vec(3, 2)], 3)
    assert a.intersect(b) == span([unit_vec(3, 1)], 3)


def _intersect_oracle(a: Subspace, b: Subspace) -> Subspace:
    """Independent route: solve s.A - t.B = 0 via the nullspace of the
    stacked coefficient matrix, then map s back through A."""
    n = a.ambient_dim
    arows = a.basis_rows()
    brows = b.basis_rows()
    cols = []
    for k in range(n):
        cols.append([row[k] for row in arows] + [-row[k] for row in brows])
    system = Matrix.from_rows(cols, len(arows) + len(brows)) if cols else Matrix.zeros(0, len(arows) + len(brows))
    ker = nullspace(system)
    out = []
    for coeffs in ker.basis_rows():
        vec = zero_vec(n)
        for c, row in zip(coeffs[:len(arows)], arows):
            vec = tuple(x + c * y for x, y in zip(vec, row))
        out.append(vec)
    return Subspace.from_rows(out, n)


def test_intersect_against_independent_oracle():
    rng = random.Random(23)
    for _ in range(30):
        n = rng.randint(1, 5)
        a = span([[rng.randint(-3, 3) for _ in range(n)] for _ in range(rng.randint(0, n))], n)
        b = span([[rng.randint(-3, 3) for _ in range(n)] for _ in range(rng.randint(0, n))], n)
        assert a.intersect(b) == _intersect_oracle(a, b)


def test_dimension_formula_examples():
    a = span([[1, 0, 0], [0, 1, 0]], 3)
    b = span([[0, 1, 0], [0, 0, 1]], 3)
    assert (a + b).dim + a.intersect(b).dim == a.dim + b.dim


def test_membership():
    s = span([unit_vec(3, 0), unit_vec(3, 1)], 3)
    assert membership(zero_vec(3), s)
    assert not membership(unit_vec(2, 0), span([unit_vec(2, 1)], 2))
    assert membership([1, 1, 0], s)
    assert not membership([1, 1, 1], s)


def test_solve_affine_identity():
    sol = solve_affine(Matrix.identity(3), [5, F(1, 2), -2])
    assert sol is not None
    assert sol.particular == (F(5), F(1, 2), F(-2))
    assert sol.homogeneous.dim == 0


def test_solve_affine_underdetermined():
    sol = solve_affine(M([[1, 1]]), [2])
    assert sol is not None
    assert sol.particular == (F(2), F(0))
    assert sol.homogeneous == span([[1, -1]], 2)
    # substitute back
    assert M([[1, 1]]).apply(sol.particular) == (F(2),)


def test_solve_affine_inconsistent():
    assert solve_affine(M([[1], [1]]), [0, 1]) is None


def test_solve_affine_random_consistency():
    rng = random.Random(77)
    for _ in range(40):
        m = rng.randint(1, 5)
        n = rng.randint(1, 5)
        a = M([[F(rng.randint(-3, 3)) for _ in range(n)] for _ in range(m)], n)
        x0 = [F(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(n)]
        b = a.apply(x0)
        sol = solve_affine(a, b)
        assert sol is not None  # consistent by construction
        assert a.apply(sol.particular) == b
        for h in sol.homogeneous.basis_rows():
            assert a.apply(h) == zero_vec(m)
        assert sol.homogeneous == nullspace(a)


def test_quotient_basis():
    whole = span([unit_vec(2, 0), unit_vec(2, 1)], 2)
    sub = span([unit_vec(2, 0)], 2)
    assert quotient_basis(whole, whole) == []
    assert quotient_basis(Subspace.zero(2), sub) == [unit_vec(2, 0)]
    ext = quotient_basis(sub, whole)
    assert ext == [unit_vec(2, 1)]
    with pytest.raises(ValueError):
        quotient_basis(span([unit_vec(2, 1)], 2), sub)


def test_quotient_functionals_cut_out_subspace():
    s = span([[1, 2, 0], [0, 0, 1]], 3)
    fns = s.quotient_functionals()
    assert len(fns) == 1
    for row in s.basis_rows():
        assert all(sum(f[k] * row[k] for k in range(3)) == 0 for f in fns)
    v = (F(0), F(1), F(0))  # not in s
    assert any(sum(f[k] * v[k] for k in range(3)) != 0 for f in fns)


def _dense_rref_oracle(rows, cols):
    """Textbook Gauss-Jordan over Fractions: no sparsity, no integer
    tricks.  Independent route for checking the production reducer."""
    m = [list(map(F, r)) for r in rows]
    pivot_row = 0
    for col in range(cols):
        sel = next((r for r in range(pivot_row, len(m)) if m[r][col] != 0), None)
        if sel is None:
            continue
        m[pivot_row], m[sel] = m[sel], m[pivot_row]
        pv = m[pivot_row][col]
        m[pivot_row] = [x / pv for x in m[pivot_row]]
        for r in range(len(m)):
            if r != pivot_row and m[r][col] != 0:
                f = m[r][col]
                m[r] = [a - f * b for a, b in zip(m[r], m[pivot_row])]
        pivot_row += 1
    return [tuple(r) for r in m], pivot_row


def test_rref_matches_textbook_dense_oracle():
    rng = random.Random(12345)
    for _ in range(300):
        nr = rng.randint(0, 7)
        nc = rng.randint(1, 7)
        rows = [[F(rng.randint(-6, 6), rng.randint(1, 4)) for _ in range(nc)]
                for _ in range(nr)]
        if nr >= 2 and rng.random() < 0.5:  # bias toward rank deficiency
            i, j = rng.sample(range(nr), 2)
            rows[i] = [rng.choice([-2, -1, 0, 1, 2]) * x for x in rows[j]]
        got, rank_got = rref(M(rows, nc))
        want_rows, rank_want = _dense_rref_oracle(rows, nc)
        assert rank_got == rank_want
        assert list(got.entries) == want_rows


def test_row_reducer_rank_matches_rref():
    rng = random.Random(5)
    for _ in range(20):
        rows = rng.randint(1, 6)
        cols = rng.randint(1, 6)
        data = [[rng.randint(-5, 5) for _ in range(cols)] for _ in range(rows)]
        red = RowReducer(cols)
        for r in data:
            red.add(r)
        _, rank = rref(M(data, cols))
        assert red.rank == rank


def test_invert_and_mat_pow():
    m = M([[2, 1], [1, 1]])
    mi = invert(m)
    assert mi is not None
    assert m @ mi == Matrix.identity(2)
    assert invert(M([[1, 2], [2, 4]])) is None
    assert mat_pow(m, 0) == Matrix.identity(2)
    assert mat_pow(m, 3) == m @ m @ m
