import pytest

from hopfcalc.linalg import Matrix
from hopfcalc.spaces import InstanceSpaces, hat_chain_iso, hat_cochain_iso


@pytest.fixture(scope="module")
def sp_dual_id(dual_id):
    return InstanceSpaces(*dual_id)


@pytest.fixture(scope="module")
def sp_dual_neg(dual_neg):
    return InstanceSpaces(*dual_neg)


@pytest.fixture(scope="module")
def sp_z2(z2_f2):
    return InstanceSpaces(*z2_f2)


@pytest.fixture(scope="module")
def sp_z3(z3_q):
    return InstanceSpaces(*z3_q)


class TestChainDims:
    def test_degree_zero_is_module(self, sp_dual_id):
        assert sp_dual_id.chain_dim(0) == 2

    def test_enveloping_dims_are_powers(self, sp_dual_id):
        # C_n for the enveloping instance has dimension (dim A)^(n+1)
        for n in range(6):
            assert sp_dual_id.chain_dim(n) == 2 ** (n + 1)

    def test_degree_three_dim_sixteen(self, sp_dual_id):
        assert sp_dual_id.chain_dim(3) == 16

    def test_group_algebra_dims(self, sp_z2, sp_z3):
        assert sp_z2.chain_dim(4) == 16
        for n in range(5):
            assert sp_z3.chain_dim(n) == 3 ** n

    def test_full_presentation_invariants(self, sp_dual_id):
        pres = sp_dual_id.chain_space(3).presentation
        assert pres.quotient_dim == 16
        assert (pres.projection @ pres.section) == Matrix.identity(
            pres.field, 16)
        assert pres.relations.dim == pres.ambient_dim - 16
        for v in pres.relations.basis_vectors():
            assert not pres.projection.apply(v)


class TestCochainDims:
    def test_degree_zero(self, sp_dual_id):
        assert sp_dual_id.cochain_space(0).dim == 2

    def test_enveloping_cochain_dims(self, sp_dual_id):
        # C^p = Hom_k(A^(x)p, A), dimension d^(p+1)
        for p in range(1, 4):
            assert sp_dual_id.cochain_space(p).dim == 2 ** (p + 1)

    def test_group_cochain_dims(self, sp_z3):
        assert sp_z3.cochain_space(1).dim == 3
        assert sp_z3.cochain_space(2).dim == 9

    def test_functional_a_linearity(self, sp_dual_id):
        # phi(t(a) . first x) = eps(t(a) s(phi(x))) for every basis functional
        h = sp_dual_id.inst
        f = h.field
        sp = sp_dual_id.cochain_space(1)
        tower = sp_dual_id.cochain_tower
        for j in range(sp.dim):
            phi = sp.functional_matrix({j: f.one})
            for ai in range(h.base.dim):
                av = {ai: f.one}
                lt = tower.l_mat(1, h.t_vec(av))
                for x in range(sp.domain_dim):
                    lhs = phi.apply(lt.col(x))
                    val = phi.apply({x: f.one})
                    rhs = h.counit.apply(
                        h.total.multiply(h.t_vec(av), h.s_vec(val)))
                    assert lhs == rhs


class TestBarDims:
    def test_bar_dims(self, sp_dual_id):
        # P_n has dimension d^(n+2) for the enveloping instance
        for n in range(4):
            assert sp_dual_id.bar_dim(n) == 2 ** (n + 2)

    def test_left_action_well_defined(self, sp_dual_id):
        h = sp_dual_id.inst
        f = h.field
        bs = sp_dual_id.bar_space(2)
        # acting by u then v equals acting by uv
        for u in range(h.udim):
            for v in range(h.udim):
                uv = h.total.mult[u][v]
                lhs = bs.left_action[u] @ bs.left_action[v]
                rhs = None
                for w, c in uv.items():
                    term = bs.left_action[w].scale(c)
                    rhs = term if rhs is None else rhs + term
                if rhs is None:
                    rhs = Matrix.zeros(f, bs.dim, bs.dim)
                assert lhs == rhs


class TestHatIsos:
    @pytest.mark.parametrize("n", [0, 1, 2])
    def test_chain_roundtrip(self, sp_dual_id, n):
        pres, fwd, back = hat_chain_iso(sp_dual_id, n)
        f = sp_dual_id.inst.field
        assert (fwd @ back) == Matrix.identity(f, sp_dual_id.chain_dim(n))
        assert (back @ fwd) == Matrix.identity(f, pres.quotient_dim)

    @pytest.mark.parametrize("p", [0, 1, 2])
    def test_cochain_roundtrip(self, sp_dual_id, p):
        hat_basis, fwd, back = hat_cochain_iso(sp_dual_id, p)
        f = sp_dual_id.inst.field
        sp = sp_dual_id.cochain_space(p)
        assert (fwd @ back) == Matrix.identity(f, sp.dim)
        assert (back @ fwd) == Matrix.identity(f, hat_basis.dim)

    def test_chain_roundtrip_group(self, sp_z3):
        pres, fwd, back = hat_chain_iso(sp_z3, 2)
        f = sp_z3.inst.field
        assert (fwd @ back) == Matrix.identity(f, sp_z3.chain_dim(2))
