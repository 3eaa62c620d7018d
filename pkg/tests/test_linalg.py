import pytest
from hypothesis import given, settings, strategies as st

from hopfcalc.errors import WellDefinednessError
from hopfcalc.fields import GF, QQ
from hopfcalc.linalg import (
    LinearSolver,
    Matrix,
    Subspace,
    induced_on_quotient,
    quotient_by,
    quotient_from_generators,
    rank_of,
    rref_kernel_image,
    split_check,
)


def q(s):
    return QQ.parse(s)


class TestRrefKernelImage:
    def test_zero_matrix(self):
        m = Matrix.zeros(QQ, 3, 3)
        rank, ker, im = rref_kernel_image(m)
        assert rank == 0
        assert ker == Subspace.full(QQ, 3)
        assert im == Subspace.zero(QQ, 3)

    def test_identity(self):
        m = Matrix.identity(QQ, 4)
        rank, ker, im = rref_kernel_image(m)
        assert rank == 4
        assert ker.dim == 0
        assert im == Subspace.full(QQ, 4)

    def test_rank_one(self):
        # hand row-reduction: [[1,2],[2,4]] has kernel (-2,1), image (1,2)
        m = Matrix.from_rows(QQ, [[q("1"), q("2")], [q("2"), q("4")]])
        rank, ker, im = rref_kernel_image(m)
        assert rank == 1
        assert ker.dim == 1 and im.dim == 1
        assert ker.contains_vec({0: q("-2"), 1: q("1")})
        assert im.contains_vec({0: q("1"), 1: q("2")})

    def test_rank_plus_kernel(self):
        m = Matrix.from_rows(QQ, [[q("1"), q("0"), q("2")], [q("0"), q("1"), q("-1")]])
        rank, ker, _ = rref_kernel_image(m)
        assert rank + ker.dim == m.ncols

    def test_canonical_idempotent(self):
        vecs = [{0: q("2"), 2: q("4")}, {1: q("3")}, {0: q("1"), 2: q("2")}]
        s1 = Subspace.from_vectors(QQ, 3, vecs)
        s2 = Subspace.from_vectors(QQ, 3, s1.basis_vectors())
        assert s1 == s2


class TestQuotient:
    def test_trivial_relations(self):
        pres = quotient_by(Subspace.zero(QQ, 5))
        assert pres.quotient_dim == 5
        assert pres.projection == Matrix.identity(QQ, 5)
        assert pres.section == Matrix.identity(QQ, 5)

    def test_full_relations(self):
        pres = quotient_by(Subspace.full(QQ, 4))
        assert pres.quotient_dim == 0

    def test_line_in_q3(self):
        rel = Subspace.from_vectors(QQ, 3, [{0: q("1"), 1: q("1")}])
        pres = quotient_by(rel)
        assert pres.quotient_dim == 2
        assert (pres.projection @ pres.section) == Matrix.identity(QQ, 2)
        # kernel of projection is exactly the relations
        _, ker, _ = rref_kernel_image(pres.projection)
        assert ker == rel
        # section image meets relations trivially
        assert split_check(rel, Subspace.from_vectors(QQ, 3, pres.section.columns())) is True

    def test_induced_identity(self):
        rel = Subspace.from_vectors(QQ, 3, [{0: q("1"), 1: q("-1")}])
        pres = quotient_by(rel)
        ind = induced_on_quotient(Matrix.identity(QQ, 3), pres, pres)
        assert ind == Matrix.identity(QQ, pres.quotient_dim)

    def test_induced_rejects_bad_operator(self):
        rel = Subspace.from_vectors(QQ, 3, [{0: q("1")}])
        pres = quotient_by(rel)
        # a map sending the relation vector e0 outside the relations
        op = Matrix.from_rows(QQ, [[q("0"), q("0"), q("0")],
                                   [q("1"), q("0"), q("0")],
                                   [q("0"), q("0"), q("1")]])
        with pytest.raises(WellDefinednessError):
            induced_on_quotient(op, pres, pres)


class TestSplitCheck:
    def test_axes(self):
        a = Subspace.from_vectors(QQ, 2, [{0: q("1")}])
        b = Subspace.from_vectors(QQ, 2, [{1: q("1")}])
        assert split_check(a, b) is True

    def test_equal_nonzero(self):
        a = Subspace.from_vectors(QQ, 2, [{0: q("1")}])
        assert split_check(a, a) is False


class TestSolver:
    def test_solve_in_rowspace(self):
        b = Matrix.from_rows(QQ, [[q("1"), q("2"), q("0")], [q("0"), q("1"), q("1")]])
        solver = LinearSolver(b)
        v = {0: q("2"), 1: q("5"), 2: q("1")}  # 2*r0 + r1
        x = solver.solve(v)
        assert x == {0: q("2"), 1: q("1")}
        assert solver.solve({2: q("7")}) is None


@st.composite
def small_matrices(draw, field):
    n = draw(st.integers(1, 4))
    m = draw(st.integers(1, 4))
    if field is QQ:
        elems = st.integers(-3, 3).map(QQ.from_int)
    else:
        elems = st.integers(0, field.p - 1)
    rows = draw(st.lists(st.lists(elems, min_size=m, max_size=m), min_size=n, max_size=n))
    return Matrix.from_rows(field, rows, ncols=m)


class TestProperties:
    @given(small_matrices(QQ))
    @settings(max_examples=60, deadline=None)
    def test_rank_transpose_qq(self, m):
        assert rank_of(m) == rank_of(m.transpose())

    @given(small_matrices(GF(5)))
    @settings(max_examples=60, deadline=None)
    def test_rank_transpose_f5(self, m):
        assert rank_of(m) == rank_of(m.transpose())

    @given(small_matrices(GF(5)))
    @settings(max_examples=40, deadline=None)
    def test_projection_section_identity(self, m):
        _, ker, _ = rref_kernel_image(m)
        pres = quotient_by(ker)
        assert (pres.projection @ pres.section) == Matrix.identity(m.field, pres.quotient_dim)
        for v in ker.basis_vectors():
            assert not pres.projection.apply(v)


def test_quotient_from_generators_dedup():
    gens = [{0: q("1"), 1: q("1")}, {0: q("2"), 1: q("2")}]
    pres = quotient_from_generators(QQ, 3, gens)
    assert pres.quotient_dim == 2
