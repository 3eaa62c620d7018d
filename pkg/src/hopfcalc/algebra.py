"""Finite-dimensional unital associative algebras over an exact field.

An algebra is given by structure constants on a labelled basis; on top of
that live algebra automorphisms, the twisted bimodules they define, and the
eigenspace grading of a semisimple automorphism.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import NotSemisimple
from .fields import QQ, PrimeField
from .linalg import Matrix, Subspace, rank_of, vec_axpy
from .report import VerificationReport, coords_counterexample


@dataclass(frozen=True)
class FinDimAlgebra:
    """A unital associative algebra given by structure constants.

    mult[i][j] is the sparse coordinate vector of e_i * e_j; the unit is a
    coordinate vector.  Associativity and the unit laws are verified by
    check_algebra, not assumed silently.
    """

    field: object
    dim: int
    labels: tuple[str, ...]
    mult: tuple  # tuple of tuples of sparse dicts
    unit: tuple  # sparse dict, frozen as sorted tuple of (idx, val)

    @classmethod
    def from_structure_constants(cls, field, dim, labels, constants, unit):
        """constants[i][j][k] = coefficient of e_k in e_i e_j (field elements)."""
        mult = tuple(
            tuple(
                {k: c for k, c in enumerate(constants[i][j]) if not field.is_zero(c)}
                for j in range(dim)
            )
            for i in range(dim)
        )
        unit_vec = {k: c for k, c in enumerate(unit) if not field.is_zero(c)}
        return cls(field, dim, tuple(labels), mult, tuple(sorted(unit_vec.items())))

    def unit_vector(self) -> dict:
        return dict(self.unit)

    def basis_product(self, i: int, j: int) -> dict:
        return self.mult[i][j]

    def multiply(self, v: dict, w: dict) -> dict:
        f = self.field
        out: dict = {}
        for i, a in v.items():
            row = self.mult[i]
            for j, b in w.items():
                vec_axpy(f, out, f.mul(a, b), row[j])
        return out

    def left_mult_matrix(self, v: dict) -> Matrix:
        cols = [self.multiply(v, {j: self.field.one}) for j in range(self.dim)]
        return Matrix.from_cols(self.field, self.dim, cols)

    def right_mult_matrix(self, v: dict) -> Matrix:
        cols = [self.multiply({j: self.field.one}, v) for j in range(self.dim)]
        return Matrix.from_cols(self.field, self.dim, cols)

    def label_of_basis(self, i: int) -> str:
        return self.labels[i]


def check_algebra(a: FinDimAlgebra) -> VerificationReport:
    """Verify associativity on all basis triples and the unit laws."""
    rep = VerificationReport()
    f = a.field
    ok = True
    witness = None
    for i in range(a.dim):
        for j in range(a.dim):
            ij = a.mult[i][j]
            for k in range(a.dim):
                left = a.multiply(ij, {k: f.one})
                right = a.multiply({i: f.one}, a.mult[j][k])
                if left != right:
                    ok = False
                    witness = {"triple": [a.labels[i], a.labels[j], a.labels[k]]}
                    break
            if not ok:
                break
        if not ok:
            break
    rep.record(ok, "algebra_associativity", "(ei ej) ek = ei (ej ek)",
               degrees=[], counterexample=witness)
    one = a.unit_vector()
    ok = True
    witness = None
    for i in range(a.dim):
        e = {i: f.one}
        if a.multiply(one, e) != e or a.multiply(e, one) != e:
            ok = False
            witness = {"basis": a.labels[i]}
            break
    rep.record(ok, "algebra_unit_laws", "1*e = e*1 = e", degrees=[], counterexample=witness)
    return rep


@dataclass(frozen=True)
class AlgebraAutomorphism:
    """An invertible, multiplicative, unit-preserving linear map."""

    algebra: FinDimAlgebra
    matrix: Matrix

    def __post_init__(self):
        a, m = self.algebra, self.matrix
        f = a.field
        if m.nrows != a.dim or m.ncols != a.dim:
            raise ValueError("automorphism matrix has wrong shape")
        if rank_of(m) != a.dim:
            raise ValueError("automorphism matrix is singular")
        if m.apply(a.unit_vector()) != a.unit_vector():
            raise ValueError("automorphism does not fix the unit")
        for i in range(a.dim):
            si = m.apply({i: f.one})
            for j in range(a.dim):
                sj = m.apply({j: f.one})
                if m.apply(a.mult[i][j]) != a.multiply(si, sj):
                    raise ValueError(
                        f"map is not multiplicative on ({a.labels[i]}, {a.labels[j]})"
                    )

    def apply(self, v: dict) -> dict:
        return self.matrix.apply(v)

    @classmethod
    def identity(cls, algebra: FinDimAlgebra) -> "AlgebraAutomorphism":
        return cls(algebra, Matrix.identity(algebra.field, algebra.dim))


@dataclass(frozen=True)
class TwistedBimodule:
    """The algebra as a bimodule with the right action twisted: b.m.a = b m s(a)."""

    algebra: FinDimAlgebra
    sigma: AlgebraAutomorphism

    def left_action(self, b: dict, m: dict) -> dict:
        return self.algebra.multiply(b, m)

    def right_action(self, m: dict, a: dict) -> dict:
        return self.algebra.multiply(m, self.sigma.apply(a))

    def check(self) -> VerificationReport:
        rep = VerificationReport()
        alg = self.algebra
        f = alg.field
        one = alg.unit_vector()
        ok = True
        for i in range(alg.dim):
            m = {i: f.one}
            if self.left_action(one, m) != m or self.right_action(m, one) != m:
                ok = False
        for b in range(alg.dim):
            for i in range(alg.dim):
                for a in range(alg.dim):
                    bv, mv, av = {b: f.one}, {i: f.one}, {a: f.one}
                    lhs = self.right_action(self.left_action(bv, mv), av)
                    rhs = self.left_action(bv, self.right_action(mv, av))
                    want = alg.multiply(alg.multiply(bv, mv), self.sigma.apply(av))
                    if lhs != rhs or lhs != want:
                        ok = False
        rep.record(ok, "twisted_bimodule_actions", "b.m.a = b m sigma(a)", degrees=[])
        return rep


@dataclass(frozen=True)
class Grading:
    """Eigenspace decomposition of the algebra under a semisimple automorphism."""

    eigenvalues: tuple
    components: tuple  # of Subspace

    def component_index(self, value) -> int | None:
        for i, ev in enumerate(self.eigenvalues):
            if ev == value:
                return i
        return None


def _det(field, a: list) -> object:
    """Exact determinant of a dense square list-of-lists, by elimination."""
    n = len(a)
    a = [row[:] for row in a]
    det = field.one
    for c in range(n):
        piv = None
        for r in range(c, n):
            if not field.is_zero(a[r][c]):
                piv = r
                break
        if piv is None:
            return field.zero
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = field.neg(det)
        det = field.mul(det, a[c][c])
        inv = field.inv(a[c][c])
        for r in range(c + 1, n):
            if field.is_zero(a[r][c]):
                continue
            factor = field.mul(a[r][c], inv)
            for k in range(c, n):
                a[r][k] = field.sub(a[r][k], field.mul(factor, a[c][k]))
    return det


def _charpoly(m: Matrix) -> list:
    """Characteristic polynomial det(xI - M), coefficients of x^0..x^n.

    Evaluated exactly at n+1 integer points and Lagrange-interpolated; only
    used over the rationals, where division is available.
    """
    f = m.field
    n = m.nrows
    dense = m.to_lists()
    xs = [f.from_int(i) for i in range(n + 1)]
    ys = []
    for x in xs:
        a = [[f.sub(f.mul(x, f.one) if i == j else f.zero, dense[i][j])
              for j in range(n)] for i in range(n)]
        ys.append(_det(f, a))
    # Lagrange interpolation accumulated in coefficient form
    coeffs = [f.zero] * (n + 1)
    for i, (xi, yi) in enumerate(zip(xs, ys)):
        basis = [f.one]
        denom = f.one
        for j, xj in enumerate(xs):
            if j == i:
                continue
            # basis *= (x - xj)
            new = [f.zero] * (len(basis) + 1)
            for k, c in enumerate(basis):
                new[k] = f.add(new[k], f.mul(c, f.neg(xj)))
                new[k + 1] = f.add(new[k + 1], c)
            basis = new
            denom = f.mul(denom, f.sub(xi, xj))
        scale = f.div(yi, denom)
        for k, c in enumerate(basis):
            coeffs[k] = f.add(coeffs[k], f.mul(scale, c))
    return coeffs


def _rational_eigenvalue_candidates(coeffs):
    """Rational root candidates of an integer-cleared polynomial."""
    dens = [getattr(c, "denominator", 1) for c in coeffs]
    lcd = 1
    for d in dens:
        g = _gcd(lcd, int(d))
        lcd = lcd // g * int(d)
    ints = [int(c * lcd) for c in coeffs]
    while ints and ints[0] == 0:
        ints = ints[1:]  # strip x factors; zero roots are excluded anyway
    while ints and ints[-1] == 0:
        ints = ints[:-1]
    if not ints:
        return []
    c0, cn = abs(ints[0]), abs(ints[-1])
    cands = set()
    for r in _divisors(c0):
        for s in _divisors(cn):
            cands.add(QQ.div(QQ.from_int(r), QQ.from_int(s)))
            cands.add(QQ.div(QQ.from_int(-r), QQ.from_int(s)))
    return sorted(cands)


def _gcd(a, b):
    a, b = abs(a), abs(b)
    while b:
        a, b = b, a % b
    return a


def _divisors(n):
    n = abs(n)
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            if d != n // d:
                out.append(n // d)
        d += 1
    return sorted(out)


def eigenspace_grading(a: FinDimAlgebra, s: AlgebraAutomorphism) -> Grading:
    """Eigenvalues of the automorphism inside the ground field, with eigenspaces.

    Raises NotSemisimple when the eigenspaces do not sum to the whole algebra
    (the automorphism has no eigenbasis over the ground field).
    """
    f = a.field
    m = s.matrix
    if isinstance(f, PrimeField):
        candidates = [f.from_int(x) for x in range(1, f.p)]
    else:
        candidates = _rational_eigenvalue_candidates(_charpoly(m))
    eigenvalues = []
    components = []
    total = 0
    ident = Matrix.identity(f, a.dim)
    for lam in candidates:
        shifted = m - ident.scale(lam)
        from .linalg import rref_kernel_image

        _, ker, _ = rref_kernel_image(shifted)
        if ker.dim > 0:
            eigenvalues.append(lam)
            components.append(ker)
            total += ker.dim
    if total != a.dim:
        raise NotSemisimple(
            f"eigenspaces span dimension {total} of {a.dim}; no eigenbasis over {f.name}"
        )
    return Grading(tuple(eigenvalues), tuple(components))


def check_grading(a: FinDimAlgebra, g: Grading) -> VerificationReport:
    """Direct-sum and multiplicativity checks for an eigenspace grading."""
    rep = VerificationReport()
    f = a.field
    total = sum(c.dim for c in g.components)
    rep.record(total == a.dim, "grading_direct_sum", "sum of components = algebra",
               degrees=[])
    ok = True
    witness = None
    evs = list(g.eigenvalues)
    for li, lam in enumerate(evs):
        for mi, mu in enumerate(evs):
            prod_val = f.mul(lam, mu)
            target = g.component_index(prod_val)
            for u in g.components[li].basis_vectors():
                for v in g.components[mi].basis_vectors():
                    p = a.multiply(u, v)
                    if not p:
                        continue
                    if target is None:
                        ok = False
                        witness = coords_counterexample(f, p, a.labels,
                                                        eigenvalues=[f.to_str(lam), f.to_str(mu)])
                    elif not g.components[target].contains_vec(p):
                        ok = False
                        witness = coords_counterexample(f, p, a.labels,
                                                        eigenvalues=[f.to_str(lam), f.to_str(mu)])
    rep.record(ok, "grading_multiplicative", "A_l A_m inside A_lm", degrees=[],
               counterexample=witness)
    return rep
