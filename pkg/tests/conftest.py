import pytest

from hopfcalc.algebra import AlgebraAutomorphism, FinDimAlgebra
from hopfcalc.fields import GF, QQ
from hopfcalc.hopf import build_enveloping, build_hopf_over_k
from hopfcalc.linalg import Matrix


def dual_numbers_algebra(field=QQ):
    one, zero = field.one, field.zero
    c = [
        [[one, zero], [zero, one]],
        [[zero, one], [zero, zero]],
    ]
    return FinDimAlgebra.from_structure_constants(field, 2, ["1", "x"], c, [one, zero])


def sign_flip(algebra):
    f = algebra.field
    m = Matrix.from_rows(f, [[f.one, f.zero], [f.zero, f.from_int(-1)]])
    return AlgebraAutomorphism(algebra, m)


def cyclic_group_table(n):
    return [[(i + j) % n for j in range(n)] for i in range(n)]


@pytest.fixture(scope="session")
def dual_id():
    a = dual_numbers_algebra()
    return build_enveloping(a, AlgebraAutomorphism.identity(a), name="dual_id")


@pytest.fixture(scope="session")
def dual_neg():
    a = dual_numbers_algebra()
    return build_enveloping(a, sign_flip(a), name="dual_neg")


@pytest.fixture(scope="session")
def z2_f2():
    return build_hopf_over_k(GF(2), cyclic_group_table(2), name="z2_f2")


@pytest.fixture(scope="session")
def z3_q():
    return build_hopf_over_k(QQ, cyclic_group_table(3), name="z3_q")
