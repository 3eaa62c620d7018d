import pytest

from hopfcalc.calculus import CalculusEngine
from hopfcalc.complexes import ParaCyclicBundle
from hopfcalc.errors import DegreeError
from hopfcalc.hopf import check_module_comodule
from hopfcalc.linalg import Matrix, vec_axpy
from hopfcalc.spaces import InstanceSpaces


def make_engine(pair, n_max):
    h, m = pair
    _, flags = check_module_comodule(h, m)
    bundle = ParaCyclicBundle(InstanceSpaces(h, m), n_max, ayd_flags=flags)
    return CalculusEngine(bundle)


@pytest.fixture(scope="module")
def eng_id(dual_id):
    return make_engine(dual_id, 5)


@pytest.fixture(scope="module")
def eng_neg(dual_neg):
    return make_engine(dual_neg, 5)


@pytest.fixture(scope="module")
def eng_z3(z3_q):
    return make_engine(z3_q, 4)


class TestDPhi:
    def test_d_mu_is_multiplication(self, eng_id):
        # D_mu = m_U as a map on the two-fold quotient
        eng = eng_id
        h = eng.inst
        f = eng.field
        mu = eng.mu()
        dmu = eng.d_phi(2, mu)
        tower = eng.spaces.cochain_tower
        # multiplication map on quotient coordinates
        ud = h.udim
        cols = []
        for tail in range(ud * ud):
            u, v = divmod(tail, ud)
            cols.append(dict(h.total.mult[u][v]))
        mult_full = Matrix.from_cols(f, ud, cols)
        mult_q = mult_full @ tower.full_sect(2)
        assert dmu == mult_q

    def test_d_phi_zero_cochain(self, eng_id):
        # a -> s(a); the unit cochain gives 1_U
        eng = eng_id
        h = eng.inst
        one = eng.unit_cochain()
        d0 = eng.d_phi(0, one)
        assert d0.col(0) == h.total.unit_vector()

    def test_eps_after_d_phi_recovers_cochain(self, eng_id):
        # eps . D_phi = phi for every basis cochain, p <= 2
        eng = eng_id
        h = eng.inst
        for p in range(1, 3):
            space = eng.cochain_space(p)
            for coords in eng.cochain_basis(p):
                full = eng.d_phi_full(p, coords)
                lhs = h.counit @ full
                assert lhs == space.full_array(coords)


class TestCup:
    def test_unit_is_cup_unit(self, eng_id):
        eng = eng_id
        one = eng.unit_cochain()
        for p in range(0, 3):
            for coords in eng.cochain_basis(p):
                assert eng.cup(0, one, p, coords) == coords
                assert eng.cup(p, coords, 0, one) == coords

    def test_zero_cochain_cup_is_product(self, eng_id):
        # a cup b = ab in C^0
        eng = eng_id
        f = eng.field
        a = {1: f.one}  # x
        b = {0: f.one, 1: f.one}  # 1 + x
        got = eng.cup(0, a, 0, b)
        assert got == eng.inst.base.multiply(a, b)

    def test_cup_associative(self, eng_id, eng_z3):
        for eng in (eng_id, eng_z3):
            for p, q, r in [(1, 1, 1), (1, 1, 2), (0, 1, 1), (2, 1, 1)]:
                for cf in eng.cochain_basis(p):
                    for cg in eng.cochain_basis(q):
                        for ch in eng.cochain_basis(r):
                            left = eng.cup(p + q, eng.cup(p, cf, q, cg), r, ch)
                            right = eng.cup(p, cf, q + r, eng.cup(q, cg, r, ch))
                            assert left == right

    def test_cup_via_mu(self, eng_id):
        # phi cup psi = (mu o_1 phi) o_{p+1} psi = (mu o_2 psi) o_1 phi
        eng = eng_id
        mu = eng.mu()
        for p in range(0, 3):
            for q in range(0, 3):
                for cf in eng.cochain_basis(p):
                    for cg in eng.cochain_basis(q):
                        cup = eng.cup(p, cf, q, cg)
                        v1 = eng.circ(p + 1, eng.circ(2, mu, p, cf, 1), q, cg, p + 1)
                        v2 = eng.circ(q + 1, eng.circ(2, mu, q, cg, 2), p, cf, 1)
                        assert cup == v1
                        assert cup == v2


class TestCircAndBracket:
    def test_mu_self_insertion(self, eng_id, eng_z3):
        for eng in (eng_id, eng_z3):
            mu = eng.mu()
            assert eng.circ(2, mu, 2, mu, 1) == eng.circ(2, mu, 2, mu, 2)

    def test_zero_cochain_inserts_nothing(self, eng_id):
        eng = eng_id
        f = eng.field
        a = {1: f.one}
        for q in range(0, 3):
            for cg in eng.cochain_basis(q):
                assert eng.circ(0, a, q, cg) if False else True
        # a o_i psi = 0 by convention
        assert eng.bar_circ(0, a, 1, eng.cochain_basis(1)[0]) == {}

    def test_comp_associativity(self, eng_id):
        # the three-case associativity of the insertion products
        eng = eng_id
        f = eng.field
        degs = [(1, 1, 1), (2, 1, 1), (1, 2, 1), (1, 1, 2), (2, 2, 1)]
        for p, q, r in degs:
            for cf in eng.cochain_basis(p):
                for cg in eng.cochain_basis(q):
                    for ch in eng.cochain_basis(r):
                        for i in range(1, p + 1):
                            fg = eng.circ(p, cf, q, cg, i)
                            for j in range(1, p + q):
                                lhs = eng.circ(p + q - 1, fg, r, ch, j)
                                if j < i:
                                    rhs = eng.circ(
                                        p + r - 1, eng.circ(p, cf, r, ch, j),
                                        q, cg, i + r - 1)
                                elif j < q + i:
                                    rhs = eng.circ(
                                        p, cf, q + r - 1,
                                        eng.circ(q, cg, r, ch, j - i + 1), i)
                                else:
                                    rhs = eng.circ(
                                        p + r - 1,
                                        eng.circ(p, cf, r, ch, j - q + 1),
                                        q, cg, i)
                                assert lhs == rhs, (p, q, r, i, j)

    def test_bracket_antisymmetry(self, eng_id):
        eng = eng_id
        f = eng.field
        for p in range(0, 3):
            for q in range(0, 3):
                for cf in eng.cochain_basis(p):
                    for cg in eng.cochain_basis(q):
                        lhs = eng.bracket(p, cf, q, cg)
                        rhs = eng.bracket(q, cg, p, cf)
                        par = ((p - 1) * (q - 1)) % 2
                        scaled = {k: f.neg(c) if par == 0 else c
                                  for k, c in rhs.items()}
                        assert lhs == scaled

    def test_coboundary_is_mu_bracket(self, eng_id, eng_z3):
        # delta phi = {mu, phi}
        for eng in (eng_id, eng_z3):
            mu = eng.mu()
            for p in range(0, 3):
                dmat = eng.delta(p)
                for coords in eng.cochain_basis(p):
                    assert dmat.apply(coords) == eng.bracket(2, mu, p, coords), p


class TestCapDGModule:
    @pytest.mark.parametrize("engname", ["eng_id", "eng_neg"])
    def test_cap_unit_identity(self, engname, request):
        eng = request.getfixturevalue(engname)
        one = eng.unit_cochain()
        for n in range(0, 4):
            assert eng.cap(0, one, n) == Matrix.identity(eng.field, eng.bundle.dim(n))

    def test_cap_degree_error(self, eng_id):
        with pytest.raises(DegreeError):
            eng_id.cap(3, eng_id.cochain_basis(3)[0], 2)

    @pytest.mark.parametrize("engname", ["eng_id", "eng_neg", "eng_z3"])
    def test_cap_composition(self, engname, request):
        # iota_phi iota_psi = iota_{phi cup psi}
        eng = request.getfixturevalue(engname)
        nmax = eng.bundle.n_max
        for p in range(0, 3):
            for q in range(0, 3):
                for n in range(p + q, min(p + q + 2, nmax) + 1):
                    for cf in eng.cochain_basis(p):
                        for cg in eng.cochain_basis(q):
                            lhs = eng.cap(p, cf, n - q) @ eng.cap(q, cg, n)
                            rhs = eng.cap(p + q, eng.cup(p, cf, q, cg), n)
                            assert lhs == rhs, (p, q, n)

    @pytest.mark.parametrize("engname", ["eng_id", "eng_neg"])
    def test_cap_boundary_commutator(self, engname, request):
        # [b, iota_phi] = iota_{delta phi}
        eng = request.getfixturevalue(engname)
        f = eng.field
        nmax = eng.bundle.n_max
        for p in range(0, 3):
            dmat = eng.delta(p)
            for n in range(p + 1, min(p + 3, nmax) + 1):
                for cf in eng.cochain_basis(p):
                    lhs = eng.bundle.b(n - p) @ eng.cap(p, cf, n)
                    term = eng.cap(p, cf, n - 1) @ eng.bundle.b(n)
                    if p % 2 == 0:
                        term = term.neg()
                    lhs = lhs + term
                    rhs = eng.cap(p + 1, dmat.apply(cf), n)
                    assert lhs == rhs, (p, n)


class TestBulletCompModule:
    def test_faces_and_degens_via_bullet(self, eng_id):
        # d_i = mu bullet_{n-i} and s_j = 1_A bullet_{n-j+1} in middle range
        eng = eng_id
        mu = eng.mu()
        one = eng.unit_cochain()
        for n in range(2, 5):
            for i in range(1, n):
                assert eng.bullet(2, mu, n, n - i) == eng.bundle.face(n, i)
            for j in range(1, n):
                assert eng.bullet(0, one, n, n - j + 1) == eng.bundle.degen(n, j)

    def test_comp_module_three_cases(self, eng_id):
        eng = eng_id
        for p in range(0, 3):
            for q in range(0, 3):
                for n in range(max(p + q, 0), 5):
                    top_q = n + 1 if q == 0 else n - q + 1
                    top_total = (n - q + 1) + 1 if p == 0 else (n - q + 1) - p + 1
                    for j in range(1, top_q + 1):
                        for i in range(1, top_total + 1):
                            for cf in eng.cochain_basis(p)[:2]:
                                for cg in eng.cochain_basis(q)[:2]:
                                    psi_b = eng.bullet(q, cg, n, j)
                                    lhs = eng.bullet(p, cf, n - q + 1, i) @ psi_b
                                    rhs = _comp_module_rhs(eng, p, cf, q, cg, n, i, j)
                                    if rhs is not None:
                                        assert lhs == rhs, (p, q, n, i, j)


def _comp_module_rhs(eng, p, cf, q, cg, n, i, j):
    # the three-case law for phi bullet_i (psi bullet_j x)
    pm, qm = p - 1, q - 1
    if j < i and i <= n - pm - qm:
        return eng.bullet(q, cg, n - p + 1, j) @ eng.bullet(p, cf, n, i + qm)
    if j - pm <= i <= j:
        comp = eng.circ(p, cf, q, cg, j - i + 1) if p >= 1 else None
        if comp is None:
            return None
        return eng.bullet(p + q - 1, comp, n, i) if p + q - 1 > 0 or comp else None
    if 1 <= i < j - pm:
        return eng.bullet(q, cg, n - p + 1, j - pm) @ eng.bullet(p, cf, n, i)
    return None


class TestLieDerivative:
    @pytest.mark.parametrize("engname", ["eng_id", "eng_neg"])
    def test_lie_mu_is_minus_b_on_cyclic(self, engname, request):
        eng = request.getfixturevalue(engname)
        mu = eng.mu()
        qc = eng.cyclic
        for n in range(2, 5):
            lhs = eng.lie_on(qc, 2, mu, n)
            assert lhs == qc.b(n).neg(), n

    @pytest.mark.parametrize("engname", ["eng_id", "eng_neg"])
    def test_lie_bracket_representation(self, engname, request):
        # [L_phi, L_psi] = L_{phi, psi} on the cyclic quotient
        eng = request.getfixturevalue(engname)
        f = eng.field
        qc = eng.cyclic
        nmax = 4
        for p in range(0, 3):
            cm_p = eng.cochain_subcomplex_cm(p, nmax)
            for q in range(0, 3):
                cm_q = eng.cochain_subcomplex_cm(q, nmax)
                for n in range(1, nmax + 1):
                    if p + q - 1 > n + 1:
                        continue
                    for cf in cm_p.basis_vectors():
                        for cg in cm_q.basis_vectors():
                            lhs = _graded_lie_commutator(eng, qc, p, cf, q, cg, n)
                            br = eng.bracket(p, cf, q, cg)
                            rhs = _lie_or_zero(eng, qc, p + q - 1, br, n)
                            assert lhs == rhs, (p, q, n)

    @pytest.mark.parametrize("engname", ["eng_id", "eng_neg"])
    def test_lie_boundary_compat(self, engname, request):
        # [b, L_phi] + L_{delta phi} = 0 on the cyclic quotient
        eng = request.getfixturevalue(engname)
        qc = eng.cyclic
        nmax = 4
        for p in range(0, 3):
            cm = eng.cochain_subcomplex_cm(p, nmax)
            dmat = eng.delta(p)
            for n in range(2, nmax + 1):
                if p > n:
                    continue
                for cf in cm.basis_vectors():
                    lie_n = _lie_or_zero(eng, qc, p, cf, n)
                    lie_n1 = _lie_or_zero(eng, qc, p, cf, n - 1)
                    target = n - p + 1
                    lhs = qc.b(target) @ lie_n if target >= 1 else None
                    # [b, L] = b L - (-1)^{|p|} L b with |p| = p - 1
                    term = lie_n1 @ qc.b(n)
                    if p % 2 == 1:
                        term = term.neg()
                    lhs = term if lhs is None else lhs + term
                    rhs = _lie_or_zero(eng, qc, p + 1, dmat.apply(cf), n)
                    assert (lhs + rhs).is_zero(), (p, n)


def _lie_or_zero(eng, qc, p, coords, n):
    f = eng.field
    target = n - p + 1
    if target < 0:
        return Matrix.zeros(f, 0, qc.dim(n))
    if p < 0 or p > n + 1:
        return Matrix.zeros(f, qc.dim(target), qc.dim(n))
    return eng.lie_on(qc, p, coords, n)


def _graded_lie_commutator(eng, qc, p, cf, q, cg, n):
    f = eng.field
    lie_psi = _lie_or_zero(eng, qc, q, cg, n)
    lie_phi_after = _lie_or_zero(eng, qc, p, cf, n - q + 1)
    first = lie_phi_after @ lie_psi
    lie_phi = _lie_or_zero(eng, qc, p, cf, n)
    lie_psi_after = _lie_or_zero(eng, qc, q, cg, n - p + 1)
    second = lie_psi_after @ lie_phi
    par = ((p - 1) * (q - 1)) % 2
    if par == 0:
        second = second.neg()
    return first + second
