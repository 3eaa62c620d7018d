import pytest

from hopfcalc.algebra import (
    AlgebraAutomorphism,
    FinDimAlgebra,
    TwistedBimodule,
    check_algebra,
    check_grading,
    eigenspace_grading,
)
from hopfcalc.errors import NotSemisimple
from hopfcalc.fields import GF, QQ
from hopfcalc.linalg import Matrix


def rationals_algebra():
    one = QQ.one
    zero = QQ.zero
    return FinDimAlgebra.from_structure_constants(
        QQ, 1, ["1"], [[[one]]], [one]
    )


def dual_numbers(field=QQ):
    one, zero = field.one, field.zero
    # basis 1, x with x^2 = 0
    c = [
        [[one, zero], [zero, one]],
        [[zero, one], [zero, zero]],
    ]
    return FinDimAlgebra.from_structure_constants(field, 2, ["1", "x"], c, [one, zero])


def truncated_poly_cubed():
    one, zero = QQ.one, QQ.zero
    # basis 1, x, x^2 with x^3 = 0
    c = [
        [[one, zero, zero], [zero, one, zero], [zero, zero, one]],
        [[zero, one, zero], [zero, zero, one], [zero, zero, zero]],
        [[zero, zero, one], [zero, zero, zero], [zero, zero, zero]],
    ]
    return FinDimAlgebra.from_structure_constants(QQ, 3, ["1", "x", "x2"], c, [one, zero, zero])


class TestCheckAlgebra:
    def test_rationals(self):
        assert check_algebra(rationals_algebra()).passed

    def test_dual_numbers(self):
        assert check_algebra(dual_numbers()).passed

    def test_multiplication(self):
        a = dual_numbers()
        x = {1: QQ.one}
        assert a.multiply(x, x) == {}
        assert a.multiply(a.unit_vector(), x) == x

    def test_nonassociative_fails_with_triple(self):
        one, zero = QQ.one, QQ.zero
        # 1, a, b with a*a = b, a*b = 1, b*a = 0, b*b = 0: (aa)a != a(aa)
        c = [
            [[one, zero, zero], [zero, one, zero], [zero, zero, one]],
            [[zero, one, zero], [zero, zero, one], [one, zero, zero]],
            [[zero, zero, one], [zero, zero, zero], [zero, zero, zero]],
        ]
        alg = FinDimAlgebra.from_structure_constants(QQ, 3, ["1", "a", "b"], c, [one, zero, zero])
        rep = check_algebra(alg)
        assert not rep.passed
        fails = rep.failures()
        assert fails[0].identity == "algebra_associativity"
        assert fails[0].counterexample["triple"] == ["a", "a", "a"]


class TestAutomorphism:
    def test_identity(self):
        a = dual_numbers()
        s = AlgebraAutomorphism.identity(a)
        assert s.apply({1: QQ.one}) == {1: QQ.one}

    def test_sign_flip(self):
        a = dual_numbers()
        m = Matrix.from_rows(QQ, [[QQ.one, QQ.zero], [QQ.zero, QQ.from_int(-1)]])
        s = AlgebraAutomorphism(a, m)
        assert s.apply({1: QQ.one}) == {1: QQ.from_int(-1)}

    def test_rejects_non_multiplicative(self):
        a = dual_numbers()
        m = Matrix.from_rows(QQ, [[QQ.one, QQ.one], [QQ.zero, QQ.one]])
        with pytest.raises(ValueError):
            AlgebraAutomorphism(a, m)


class TestGrading:
    def test_identity_grading(self):
        a = dual_numbers()
        g = eigenspace_grading(a, AlgebraAutomorphism.identity(a))
        assert g.eigenvalues == (QQ.one,)
        assert g.components[0].dim == 2
        assert check_grading(a, g).passed

    def test_sign_flip_grading(self):
        a = dual_numbers()
        m = Matrix.from_rows(QQ, [[QQ.one, QQ.zero], [QQ.zero, QQ.from_int(-1)]])
        g = eigenspace_grading(a, AlgebraAutomorphism(a, m))
        evs = sorted(QQ.to_str(e) for e in g.eigenvalues)
        assert evs == ["-1", "1"]
        plus = g.components[g.component_index(QQ.one)]
        minus = g.components[g.component_index(QQ.from_int(-1))]
        assert plus.contains_vec({0: QQ.one}) and plus.dim == 1
        assert minus.contains_vec({1: QQ.one}) and minus.dim == 1
        assert check_grading(a, g).passed

    def test_not_semisimple(self):
        a = truncated_poly_cubed()
        # sigma(x) = x + x^2 is an automorphism with a Jordan block
        m = Matrix.from_rows(QQ, [
            [QQ.one, QQ.zero, QQ.zero],
            [QQ.zero, QQ.one, QQ.zero],
            [QQ.zero, QQ.one, QQ.one],
        ])
        s = AlgebraAutomorphism(a, m)
        with pytest.raises(NotSemisimple):
            eigenspace_grading(a, s)

    def test_prime_field_grading(self):
        a = dual_numbers(GF(5))
        f = GF(5)
        m = Matrix.from_rows(f, [[f.one, f.zero], [f.zero, f.from_int(-1)]])
        g = eigenspace_grading(a, AlgebraAutomorphism(a, m))
        assert sorted(g.eigenvalues) == [1, 4]


class TestTwistedBimodule:
    def test_actions(self):
        a = dual_numbers()
        m = Matrix.from_rows(QQ, [[QQ.one, QQ.zero], [QQ.zero, QQ.from_int(-1)]])
        tb = TwistedBimodule(a, AlgebraAutomorphism(a, m))
        assert tb.check().passed
        x = {1: QQ.one}
        one = a.unit_vector()
        # m.x = m sigma(x) = -m x
        assert tb.right_action(one, x) == {1: QQ.from_int(-1)}
