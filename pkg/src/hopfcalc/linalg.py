"""Exact sparse linear algebra: kernels, images, canonical subspaces, quotients.

Vectors are dicts mapping coordinate index to a nonzero field element;
matrices store sparse rows.  Subspaces are kept in reduced column echelon
form with leftmost-pivot tie-breaking, so equality of subspaces is equality
of basis matrices and every construction downstream is deterministic.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import WellDefinednessError


# ---------------------------------------------------------------------------
# sparse vectors


def vec_add(field, u: dict, v: dict) -> dict:
    out = dict(u)
    for j, c in v.items():
        s = field.add(out.get(j, field.zero), c)
        if field.is_zero(s):
            out.pop(j, None)
        else:
            out[j] = s
    return out

def vec_sub(field, u: dict, v: dict) -> dict:
    out = dict(u)
    for j, c in v.items():
        s = field.sub(out.get(j, field.zero), c)
        if field.is_zero(s):
            out.pop(j, None)
        else:
            out[j] = s
    return out

def vec_scale(field, c, v: dict) -> dict:
    if field.is_zero(c):
        return {}
    return {j: field.mul(c, x) for j, x in v.items()}

def vec_axpy(field, acc: dict, c, v: dict) -> None:
    """acc += c*v in place."""
    if field.is_zero(c):
        return
    for j, x in v.items():
        s = field.add(acc.get(j, field.zero), field.mul(c, x))
        if field.is_zero(s):
            acc.pop(j, None)
        else:
            acc[j] = s


# ---------------------------------------------------------------------------
# matrices


class Matrix:
    """Immutable-by-convention sparse matrix over an exact field."""

    __slots__ = ("field", "nrows", "ncols", "rows")

    def __init__(self, field, nrows: int, ncols: int, rows=None):
        self.field = field
        self.nrows = nrows
        self.ncols = ncols
        if rows is None:
            rows = [dict() for _ in range(nrows)]
        self.rows = rows

    # -- constructors

    @classmethod
    def zeros(cls, field, nrows, ncols):
        return cls(field, nrows, ncols)

    @classmethod
    def identity(cls, field, n):
        return cls(field, n, n, [{i: field.one} for i in range(n)])

    @classmethod
    def from_rows(cls, field, dense_rows, ncols=None):
        nrows = len(dense_rows)
        if ncols is None:
            ncols = len(dense_rows[0]) if nrows else 0
        rows = []
        for r in dense_rows:
            rows.append({j: c for j, c in enumerate(r) if not field.is_zero(c)})
        return cls(field, nrows, ncols, rows)

    @classmethod
    def from_cols(cls, field, nrows, cols):
        """Build from a list of sparse column dicts."""
        rows = [dict() for _ in range(nrows)]
        for j, col in enumerate(cols):
            for i, c in col.items():
                if not field.is_zero(c):
                    rows[i][j] = c
        return cls(field, nrows, len(cols), rows)

    # -- access

    def entry(self, i, j):
        return self.rows[i].get(j, self.field.zero)

    def col(self, j) -> dict:
        f = self.field
        out = {}
        for i, row in enumerate(self.rows):
            c = row.get(j)
            if c is not None and not f.is_zero(c):
                out[i] = c
        return out

    def columns(self) -> list[dict]:
        cols = [dict() for _ in range(self.ncols)]
        for i, row in enumerate(self.rows):
            for j, c in row.items():
                cols[j][i] = c
        return cols

    def to_lists(self):
        z = self.field.zero
        return [[row.get(j, z) for j in range(self.ncols)] for row in self.rows]

    def nnz(self) -> int:
        return sum(len(r) for r in self.rows)

    # -- arithmetic

    def matmul(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.nrows}x{self.ncols} @ {other.nrows}x{other.ncols}")
        f = self.field
        orows = other.rows
        rows = []
        for row in self.rows:
            acc: dict = {}
            for k, a in row.items():
                vec_axpy(f, acc, a, orows[k])
            rows.append(acc)
        return Matrix(f, self.nrows, other.ncols, rows)

    __matmul__ = matmul

    def apply(self, v: dict) -> dict:
        """Matrix times sparse column vector."""
        f = self.field
        out = {}
        for i, row in enumerate(self.rows):
            s = f.zero
            hit = False
            if len(row) <= len(v):
                for j, a in row.items():
                    c = v.get(j)
                    if c is not None:
                        s = f.add(s, f.mul(a, c))
                        hit = True
            else:
                for j, c in v.items():
                    a = row.get(j)
                    if a is not None:
                        s = f.add(s, f.mul(a, c))
                        hit = True
            if hit and not f.is_zero(s):
                out[i] = s
        return out

    def add(self, other: "Matrix") -> "Matrix":
        f = self.field
        rows = [vec_add(f, a, b) for a, b in zip(self.rows, other.rows)]
        return Matrix(f, self.nrows, self.ncols, rows)

    def sub(self, other: "Matrix") -> "Matrix":
        f = self.field
        rows = [vec_sub(f, a, b) for a, b in zip(self.rows, other.rows)]
        return Matrix(f, self.nrows, self.ncols, rows)

    __add__ = add
    __sub__ = sub

    def scale(self, c) -> "Matrix":
        f = self.field
        return Matrix(f, self.nrows, self.ncols, [vec_scale(f, c, r) for r in self.rows])

    def neg(self) -> "Matrix":
        f = self.field
        return Matrix(f, self.nrows, self.ncols,
                      [{j: f.neg(c) for j, c in r.items()} for r in self.rows])

    __neg__ = neg

    def transpose(self) -> "Matrix":
        rows = [dict() for _ in range(self.ncols)]
        for i, row in enumerate(self.rows):
            for j, c in row.items():
                rows[j][i] = c
        return Matrix(self.field, self.ncols, self.nrows, rows)

    def kron(self, other: "Matrix") -> "Matrix":
        f = self.field
        rows = [dict() for _ in range(self.nrows * other.nrows)]
        for i1, r1 in enumerate(self.rows):
            for i2, r2 in enumerate(other.rows):
                tgt = rows[i1 * other.nrows + i2]
                for j1, a in r1.items():
                    for j2, b in r2.items():
                        tgt[j1 * other.ncols + j2] = f.mul(a, b)
        return Matrix(f, self.nrows * other.nrows, self.ncols * other.ncols, rows)

    def is_zero(self) -> bool:
        return all(not r for r in self.rows)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return (self.nrows, self.ncols) == (other.nrows, other.ncols) and self.rows == other.rows

    def __hash__(self):
        raise TypeError("Matrix is unhashable")

    def __repr__(self):
        return f"Matrix({self.nrows}x{self.ncols} over {self.field.name}, nnz={self.nnz()})"


def power(m: Matrix, k: int) -> Matrix:
    out = Matrix.identity(m.field, m.nrows)
    for _ in range(k):
        out = out @ m
    return out


# ---------------------------------------------------------------------------
# echelon forms


class RowEchelon:
    """Incremental fully-reduced row echelon form of a growing span.

    Rows are kept normalized (pivot value one) and mutually reduced, so the
    row set is the canonical reduced echelon basis of the span at any time.
    """

    def __init__(self, field, ncols: int):
        self.field = field
        self.ncols = ncols
        self.pivot_rows: dict[int, dict] = {}

    @property
    def rank(self) -> int:
        return len(self.pivot_rows)

    def pivots(self) -> list[int]:
        return sorted(self.pivot_rows)

    def reduce(self, vec: dict) -> dict:
        """Residual of vec after elimination against the current basis."""
        f = self.field
        v = dict(vec)
        while True:
            hit = None
            for j in v:
                if j in self.pivot_rows:
                    hit = j
                    break
            if hit is None:
                return v
            c = v[hit]
            vec_axpy(f, v, f.neg(c), self.pivot_rows[hit])
            v.pop(hit, None)

    def add(self, vec: dict) -> bool:
        """Insert a vector; returns True when the rank grew."""
        f = self.field
        v = self.reduce(vec)
        if not v:
            return False
        p = min(v)
        inv = f.inv(v[p])
        row = {j: f.mul(inv, c) for j, c in v.items()}
        # keep existing rows reduced against the new pivot
        for q, r in self.pivot_rows.items():
            c = r.get(p)
            if c is not None:
                vec_axpy(f, r, f.neg(c), row)
                r.pop(p, None)
        self.pivot_rows[p] = row
        return True

    def contains(self, vec: dict) -> bool:
        return not self.reduce(vec)

    def basis_rows(self) -> list[dict]:
        return [self.pivot_rows[p] for p in self.pivots()]


def rref_rows(field, vectors, ncols):
    """Canonical reduced row echelon basis of the span of the given vectors."""
    ech = RowEchelon(field, ncols)
    for v in vectors:
        ech.add(v)
    return ech


# ---------------------------------------------------------------------------
# subspaces


@dataclass(frozen=True)
class Subspace:
    """A subspace in canonical form: basis columns in reduced column echelon.

    Pivot rows are strictly increasing and each pivot row is zero in every
    other basis column, so two equal subspaces have identical basis matrices.
    """

    ambient_dim: int
    basis: Matrix  # ambient_dim x dim

    @classmethod
    def from_vectors(cls, field, ambient_dim: int, vectors) -> "Subspace":
        ech = rref_rows(field, vectors, ambient_dim)
        cols = ech.basis_rows()
        return cls(ambient_dim, Matrix.from_cols(field, ambient_dim, cols))

    @classmethod
    def zero(cls, field, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, Matrix.zeros(field, ambient_dim, 0))

    @classmethod
    def full(cls, field, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, Matrix.identity(field, ambient_dim))

    @property
    def field(self):
        return self.basis.field

    @property
    def dim(self) -> int:
        return self.basis.ncols

    def basis_vectors(self) -> list[dict]:
        return self.basis.columns()

    def pivots(self) -> list[int]:
        return [min(c) for c in self.basis.columns()]

    def _echelon(self) -> RowEchelon:
        ech = RowEchelon(self.field, self.ambient_dim)
        for v in self.basis_vectors():
            ech.add(v)
        return ech

    def contains_vec(self, vec: dict) -> bool:
        return self._echelon().contains(vec)

    def contains(self, other: "Subspace") -> bool:
        ech = self._echelon()
        return all(ech.contains(v) for v in other.basis_vectors())

    def sum(self, other: "Subspace") -> "Subspace":
        vecs = self.basis_vectors() + other.basis_vectors()
        return Subspace.from_vectors(self.field, self.ambient_dim, vecs)

    def intersection(self, other: "Subspace") -> "Subspace":
        """Intersection via the kernel of [A | -B]."""
        f = self.field
        a, b = self.basis, other.basis
        stacked = Matrix(f, self.ambient_dim, a.ncols + b.ncols)
        for i in range(self.ambient_dim):
            row = dict(a.rows[i])
            for j, c in b.rows[i].items():
                row[a.ncols + j] = f.neg(c)
            stacked.rows[i] = row
        _, ker, _ = rref_kernel_image(stacked)
        vecs = []
        for v in ker.basis_vectors():
            u = {j: c for j, c in v.items() if j < a.ncols}
            vecs.append(a.apply(u))
        return Subspace.from_vectors(f, self.ambient_dim, vecs)

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self.basis == other.basis


def rref_kernel_image(m: Matrix):
    """Rank, kernel and column-space image of a matrix, all canonical.

    rank + dim(kernel) == ncols; the image is the span of the columns.
    """
    f = m.field
    # Row-reduce with the standard free-variable kernel construction.
    ech = RowEchelon(f, m.ncols)
    for row in m.rows:
        ech.add(dict(row))
    rank = ech.rank
    pivots = ech.pivots()
    pivot_set = set(pivots)
    free = [j for j in range(m.ncols) if j not in pivot_set]
    kvecs = []
    for j in free:
        v = {j: f.one}
        for p in pivots:
            c = ech.pivot_rows[p].get(j)
            if c is not None:
                v[p] = f.neg(c)
        kvecs.append(v)
    kernel = Subspace.from_vectors(f, m.ncols, kvecs)
    image = Subspace.from_vectors(f, m.nrows, m.columns())
    return rank, kernel, image


def rank_of(m: Matrix) -> int:
    ech = RowEchelon(m.field, m.ncols)
    for row in m.rows:
        ech.add(dict(row))
    return ech.rank


def split_check(a: Subspace, b: Subspace) -> bool:
    """True iff the two subspaces are complementary in their ambient space."""
    if a.ambient_dim != b.ambient_dim:
        raise ValueError("ambient dimensions differ")
    if a.dim + b.dim != a.ambient_dim:
        return False
    ech = RowEchelon(a.field, a.ambient_dim)
    for v in a.basis_vectors() + b.basis_vectors():
        ech.add(v)
    return ech.rank == a.ambient_dim


# ---------------------------------------------------------------------------
# quotients


@dataclass(frozen=True)
class QuotientPresentation:
    """A quotient space presented by (projection, section) over an ambient space.

    projection . section is the identity on quotient coordinates, the kernel
    of the projection equals the relation subspace exactly, and the section
    hits a complement of the relations spanned by non-pivot coordinates.
    """

    ambient_dim: int
    relations: Subspace
    projection: Matrix  # quotient_dim x ambient_dim
    section: Matrix     # ambient_dim x quotient_dim
    quotient_dim: int

    @property
    def field(self):
        return self.projection.field

    def project(self, vec: dict) -> dict:
        return self.projection.apply(vec)

    def lift(self, coords: dict) -> dict:
        return self.section.apply(coords)

    def kills(self, vec: dict) -> bool:
        return not self.projection.apply(vec)


def quotient_by(relations: Subspace) -> QuotientPresentation:
    """Present ambient/relations with the complement of pivot coordinates."""
    f = relations.field
    amb = relations.ambient_dim
    cols = relations.basis.columns()
    pivots = [min(c) for c in cols] if cols else []
    pivot_set = set(pivots)
    nonpivots = [j for j in range(amb) if j not in pivot_set]
    q = len(nonpivots)
    # projection: v  |->  (v - B * v[pivots]) restricted to non-pivot rows
    proj_rows = []
    for r, j in enumerate(nonpivots):
        row = {j: f.one}
        for k, col in enumerate(cols):
            c = col.get(j)
            if c is not None:
                p = pivots[k]
                row[p] = f.add(row.get(p, f.zero), f.neg(c))
                if f.is_zero(row[p]):
                    del row[p]
        proj_rows.append(row)
    projection = Matrix(f, q, amb, proj_rows)
    section = Matrix.from_cols(f, amb, [{j: f.one} for j in nonpivots])
    return QuotientPresentation(amb, relations, projection, section, q)


def quotient_from_generators(field, ambient_dim: int, generators) -> QuotientPresentation:
    return quotient_by(Subspace.from_vectors(field, ambient_dim, generators))


def induced_on_quotient(op: Matrix, src: QuotientPresentation,
                        dst: QuotientPresentation) -> Matrix:
    """The matrix of an ambient operator on quotient coordinates.

    Verifies that the operator maps the source relations into the target
    relations; raises WellDefinednessError with the violating relation
    vector otherwise.
    """
    if op.ncols != src.ambient_dim or op.nrows != dst.ambient_dim:
        raise ValueError("operator shape does not match the presentations")
    for k, rel in enumerate(src.relations.basis_vectors()):
        img = op.apply(rel)
        if dst.projection.apply(img):
            raise WellDefinednessError(
                f"operator does not preserve relations (relation basis vector {k})",
                vector=rel,
            )
    return dst.projection @ op @ src.section


def induced_unchecked(op: Matrix, src: QuotientPresentation,
                      dst: QuotientPresentation) -> Matrix:
    """Like induced_on_quotient but without the preservation check.

    For internal tower plumbing where descent is guaranteed by construction.
    """
    return dst.projection @ op @ src.section


class LinearSolver:
    """Solve x @ B = v for a fixed matrix B with independent rows."""

    def __init__(self, basis: Matrix):
        f = basis.field
        self.basis = basis
        self.field = f
        n = basis.ncols + basis.nrows
        ech = RowEchelon(f, n)
        for i, row in enumerate(basis.rows):
            aug = dict(row)
            aug[basis.ncols + i] = f.one
            ech.add(aug)
        if ech.rank != basis.nrows:
            raise ValueError("basis rows are dependent")
        self._ech = ech
        self._split = basis.ncols

    def solve(self, vec: dict):
        """Coefficients expressing vec in the row basis, or None."""
        f = self.field
        res = self._ech.reduce(dict(vec))
        if any(j < self._split for j in res):
            return None
        return {j - self._split: f.neg(c) for j, c in res.items()}
