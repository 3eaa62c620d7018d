"""Graded spaces the calculus acts on: chains, cochains, bar resolution.

Tensor powers over A^op are built as layered quotients: level n is presented
over the layer ambient Q_{n-1} (x)_k U, with only the newest adjacent-pair
relations  z.t(a) (x) v ~ z (x) t(a) v  imposed (older relations are already
encoded in Q_{n-1}).  This keeps every matrix at worst a few thousand wide
even when the full k-tensor ambient would be astronomically larger.  A
full-ambient presentation is composed on demand for moderate degrees.
"""
from __future__ import annotations

from dataclasses import dataclass

from .hopf import HopfAlgebroidInstance, ModuleComodule
from .linalg import (
    Matrix,
    QuotientPresentation,
    Subspace,
    quotient_from_generators,
    rref_kernel_image,
    vec_axpy,
)

FULL_AMBIENT_CAP = 70000


@dataclass
class _Level:
    n: int
    pres: QuotientPresentation | None  # None at level 0
    dim: int
    labels: tuple
    r_mats: list | None  # right mult on the last factor, per U-basis
    l_mats: list | None  # left mult on the first factor, per U-basis


class TensorTower:
    """Quotient tensor powers  base (x)_Aop U (x)_Aop ... (x)_Aop U."""

    def __init__(self, inst: HopfAlgebroidInstance, base_dim, base_labels,
                 base_action=None, track_left=False, base_l_mats=None):
        """base_action: per-U-basis matrices for the right action of U on the
        base (None when the base is the ground field and generates no
        relations with the first factor)."""
        self.inst = inst
        self.field = inst.field
        self.udim = inst.udim
        f = self.field
        self._umult_right = [inst.total.right_mult_matrix({j: f.one})
                             for j in range(self.udim)]
        self._umult_left = [inst.total.left_mult_matrix({j: f.one})
                            for j in range(self.udim)]
        self._t_vecs = [inst.t_vec({i: f.one}) for i in range(inst.base.dim)]
        r0 = None
        if base_action is not None:
            r0 = [base_action(j) for j in range(self.udim)]
        self.levels: list[_Level] = [
            _Level(0, None, base_dim, tuple(base_labels), r0,
                   list(base_l_mats) if base_l_mats else None)
        ]
        self.track_left = track_left
        self._full_proj: dict[int, Matrix] = {}
        self._full_sect: dict[int, Matrix] = {}
        self._face_mult: dict = {}
        self._insert_unit: dict = {}
        self._face_eps: dict = {}

    # -- construction -------------------------------------------------------

    def level(self, n: int) -> _Level:
        while len(self.levels) <= n:
            self._extend()
        return self.levels[n]

    def dim(self, n: int) -> int:
        return self.level(n).dim

    def labels(self, n: int) -> tuple:
        return self.level(n).labels

    def _extend(self):
        f = self.field
        prev = self.levels[-1]
        n = prev.n + 1
        ud = self.udim
        amb = prev.dim * ud
        gens = []
        if prev.r_mats is not None:
            for ai, tv in enumerate(self._t_vecs):
                r_t = self._combine(prev.r_mats, tv, prev.dim)
                lt = self.inst.total.left_mult_matrix(tv)
                for z in range(prev.dim):
                    rz = r_t.col(z)
                    for v in range(ud):
                        vec: dict = {}
                        for i, c in rz.items():
                            vec[i * ud + v] = c
                        for j, c in lt.col(v).items():
                            s = f.sub(vec.get(z * ud + j, f.zero), c)
                            if f.is_zero(s):
                                vec.pop(z * ud + j, None)
                            else:
                                vec[z * ud + j] = s
                        if vec:
                            gens.append(vec)
        pres = quotient_from_generators(f, amb, gens)
        labels = []
        for j in range(pres.quotient_dim):
            idx = min(pres.section.col(j))
            z, v = divmod(idx, ud)
            labels.append(f"{prev.labels[z]}|{self.inst.total.labels[v]}")
        # right multiplication on the new last factor
        ident_prev = Matrix.identity(f, prev.dim)
        r_mats = []
        for j in range(ud):
            op = ident_prev.kron(self._umult_right[j])
            r_mats.append(pres.projection @ op @ pres.section)
        l_mats = None
        if self.track_left:
            idu = Matrix.identity(f, ud)
            if prev.l_mats is not None:
                ops = [prev.l_mats[j].kron(idu) for j in range(ud)]
            else:
                # the factor being appended is the first actual tensor factor
                idp = Matrix.identity(f, prev.dim)
                ops = [idp.kron(self._umult_left[j]) for j in range(ud)]
            l_mats = [pres.projection @ op @ pres.section for op in ops]
        self.levels.append(_Level(n, pres, pres.quotient_dim, tuple(labels), r_mats, l_mats))

    @staticmethod
    def _combine(mats, vec, dim):
        f = mats[0].field
        rows = [dict() for _ in range(dim)]
        for j, c in vec.items():
            for i, row in enumerate(mats[j].rows):
                for k, v in row.items():
                    s = f.add(rows[i].get(k, f.zero), f.mul(c, v))
                    if f.is_zero(s):
                        rows[i].pop(k, None)
                    else:
                        rows[i][k] = s
        return Matrix(f, dim, dim, rows)

    # -- per-level operators --------------------------------------------------

    def layer_proj(self, n: int) -> Matrix:
        return self.level(n).pres.projection

    def layer_sect(self, n: int) -> Matrix:
        return self.level(n).pres.section

    def r_mat(self, n: int, uvec: dict) -> Matrix:
        """Right multiplication by a U-vector on the last tensor factor."""
        lev = self.level(n)
        return self._combine(lev.r_mats, uvec, lev.dim)

    def l_mat(self, n: int, uvec: dict) -> Matrix:
        lev = self.level(n)
        if lev.l_mats is None:
            raise ValueError(f"left action not tracked at level {n}")
        return self._combine(lev.l_mats, uvec, lev.dim)

    def append(self, n: int, uvec: dict) -> Matrix:
        """Q_n -> Q_{n+1}, z -> class of z (x) u."""
        f = self.field
        self.level(n + 1)
        qn = self.dim(n)
        cols = []
        for z in range(qn):
            vec = {z * self.udim + j: c for j, c in uvec.items()}
            cols.append(self.layer_proj(n + 1).apply(vec))
        return Matrix.from_cols(f, self.dim(n + 1), cols)

    def face_mult(self, n: int, k: int) -> Matrix:
        """Multiply the adjacent factor pair at distance k from the right end.

        k = 1 multiplies the last two factors; k = n folds the first appended
        factor into the base (which requires a base action).
        """
        key = (n, k)
        if key in self._face_mult:
            return self._face_mult[key]
        if not (1 <= k <= n):
            raise ValueError(f"face_mult out of range: k={k}, n={n}")
        f = self.field
        prev = self.level(n - 1)
        if k == 1:
            cols_by_v = [self.r_mat(n - 1, {v: f.one}) for v in range(self.udim)]
            rows = [dict() for _ in range(prev.dim)]
            for v, mat in enumerate(cols_by_v):
                for i, row in enumerate(mat.rows):
                    for z, c in row.items():
                        rows[i][z * self.udim + v] = c
            op = Matrix(f, prev.dim, prev.dim * self.udim, rows)
        else:
            inner = self.face_mult(n - 1, k - 1)
            op = self.layer_proj(n - 1) @ inner.kron(Matrix.identity(f, self.udim))
        out = op @ self.layer_sect(n)
        self._face_mult[key] = out
        return out

    def face_eps_last(self, n: int) -> Matrix:
        """Drop the last factor through the counit: z (x) v -> eps(v)|>> z."""
        if n in self._face_eps:
            return self._face_eps[n]
        f = self.field
        prev = self.level(n - 1)
        h = self.inst
        rows = [dict() for _ in range(prev.dim)]
        for v in range(self.udim):
            tv = h.t_vec(h.counit.apply({v: f.one}))
            mat = self.r_mat(n - 1, tv)
            for i, row in enumerate(mat.rows):
                for z, c in row.items():
                    rows[i][z * self.udim + v] = c
        out = Matrix(f, prev.dim, prev.dim * self.udim, rows) @ self.layer_sect(n)
        self._face_eps[n] = out
        return out

    def insert_unit(self, n: int, j: int) -> Matrix:
        """Q_n -> Q_{n+1}: insert the unit of U after the factor at distance j
        from the right end (j = 0 appends at the very end)."""
        key = (n, j)
        if key in self._insert_unit:
            return self._insert_unit[key]
        f = self.field
        if j == 0:
            out = self.append(n, self.inst.total.unit_vector())
        else:
            inner = self.insert_unit(n - 1, j - 1)
            op = inner.kron(Matrix.identity(f, self.udim))
            out = self.layer_proj(n + 1) @ op @ self.layer_sect(n)
        self._insert_unit[key] = out
        return out

    # -- full-ambient view ----------------------------------------------------

    def full_ambient_dim(self, n: int) -> int:
        return self.levels[0].dim * self.udim ** n

    def full_proj(self, n: int) -> Matrix:
        if n < 0:
            raise ValueError("negative tensor degree")
        if n not in self._full_proj:
            f = self.field
            if n == 0:
                self._full_proj[0] = Matrix.identity(f, self.levels[0].dim)
            else:
                if self.full_ambient_dim(n) > FULL_AMBIENT_CAP:
                    raise ValueError(
                        f"full ambient dimension {self.full_ambient_dim(n)} exceeds cap")
                prev = self.full_proj(n - 1)
                self._full_proj[n] = self.layer_proj(n) @ prev.kron(
                    Matrix.identity(f, self.udim))
        return self._full_proj[n]

    def full_sect(self, n: int) -> Matrix:
        if n not in self._full_sect:
            f = self.field
            if n == 0:
                self._full_sect[0] = Matrix.identity(f, self.levels[0].dim)
            else:
                prev = self.full_sect(n - 1)
                self._full_sect[n] = prev.kron(
                    Matrix.identity(f, self.udim)) @ self.layer_sect(n)
        return self._full_sect[n]

    def full_presentation(self, n: int) -> QuotientPresentation:
        proj = self.full_proj(n)
        sect = self.full_sect(n)
        _, ker, _ = rref_kernel_image(proj)
        return QuotientPresentation(self.full_ambient_dim(n), ker, proj, sect,
                                    self.dim(n))

    def full_labels(self, n: int) -> list:
        base = self.levels[0].labels
        out = list(base)
        for _ in range(n):
            out = [f"{z}|{u}" for z in out for u in self.inst.total.labels]
        return out


# ---------------------------------------------------------------------------
# public space types


@dataclass(frozen=True)
class ChainSpace:
    degree: int
    presentation: QuotientPresentation
    labels: tuple

    @property
    def dim(self):
        return self.presentation.quotient_dim


@dataclass(frozen=True)
class CochainSpace:
    """Right-A-linear functionals on the degree-p tensor power of U.

    A functional phi is stored as its matrix A-coords x Q_p-coords; the
    canonical coordinate space is the kernel of the A-linearity constraints
    phi(t(a).first x) = eps(t(a) s(phi(x))).
    """

    degree: int
    domain_dim: int
    base_dim: int
    functional_basis: Subspace  # inside flattened (base_dim * domain_dim)
    full_arrays: tuple  # per basis functional: Matrix base_dim x udim**p

    @property
    def dim(self):
        return self.functional_basis.dim

    def functional_matrix(self, coords: dict) -> Matrix:
        f = self.functional_basis.field
        flat = self.functional_basis.basis.apply(coords)
        rows = [dict() for _ in range(self.base_dim)]
        for idx, c in flat.items():
            ai, x = divmod(idx, self.domain_dim)
            rows[ai][x] = c
        return Matrix(f, self.base_dim, self.domain_dim, rows)

    def full_array(self, coords: dict) -> Matrix:
        f = self.functional_basis.field
        out = None
        for j, c in coords.items():
            term = self.full_arrays[j].scale(c)
            out = term if out is None else out + term
        if out is None:
            ncols = self.full_arrays[0].ncols if self.full_arrays else 1
            return Matrix.zeros(f, self.base_dim, ncols)
        return out

    def coords_of_functional(self, mat: Matrix, solver=None) -> dict:
        flat: dict = {}
        for ai, row in enumerate(mat.rows):
            for x, c in row.items():
                flat[ai * self.domain_dim + x] = c
        if solver is None:
            solver = self._solver()
        coords = solver.solve(flat)
        if coords is None:
            raise ValueError("functional is not A-linear on the quotient")
        return coords

    def _solver(self):
        from .linalg import LinearSolver

        if not hasattr(self, "_solver_cache"):
            object.__setattr__(self, "_solver_cache",
                               LinearSolver(self.functional_basis.basis.transpose()))
        return self._solver_cache


@dataclass(frozen=True)
class BarSpace:
    degree: int
    presentation: QuotientPresentation
    labels: tuple
    left_action: tuple  # per U-basis: left multiplication on the first factor

    @property
    def dim(self):
        return self.presentation.quotient_dim


class InstanceSpaces:
    """All graded spaces of one instance, built lazily and cached."""

    def __init__(self, h: HopfAlgebroidInstance, m: ModuleComodule):
        self.inst = h
        self.module = m
        f = h.field
        self.chain_tower = TensorTower(
            h, m.dim, m.labels, base_action=lambda j: m.action[j])
        self.bar_tower = TensorTower(
            h, h.udim, h.total.labels,
            base_action=lambda j: h.total.right_mult_matrix({j: f.one}),
            track_left=True,
            base_l_mats=[h.total.left_mult_matrix({j: f.one}) for j in range(h.udim)],
        )
        self.cochain_tower = TensorTower(
            h, 1, ("",), base_action=None, track_left=True)
        self._cochain_spaces: dict[int, CochainSpace] = {}

    # -- chains ---------------------------------------------------------------

    def chain_dim(self, n: int) -> int:
        return self.chain_tower.dim(n)

    def chain_space(self, n: int) -> ChainSpace:
        tower = self.chain_tower
        return ChainSpace(n, tower.full_presentation(n), tuple(tower.full_labels(n)))

    # -- cochains ---------------------------------------------------------------

    def cochain_space(self, p: int) -> CochainSpace:
        if p in self._cochain_spaces:
            return self._cochain_spaces[p]
        h = self.inst
        f = h.field
        d = h.base.dim
        if p == 0:
            basis = Subspace.full(f, d)
            arrays = tuple(Matrix.from_cols(f, d, [{i: f.one}]) for i in range(d))
            space = CochainSpace(0, 1, d, basis, arrays)
        else:
            tower = self.cochain_tower
            qdim = tower.dim(p)
            # K_a : c -> eps(t(a) s(c))
            conds = []
            for ai in range(d):
                av = {ai: f.one}
                lt = tower.l_mat(p, h.t_vec(av))
                ka_cols = [h.counit.apply(
                    h.total.multiply(h.t_vec(av), h.s_vec({ci: f.one})))
                    for ci in range(d)]
                ka = Matrix.from_cols(f, d, ka_cols)
                # row for each (output coord ai2, domain basis x):
                #   sum_y phi[ai2, y] lt[y, x] - sum_aj ka[ai2, aj] phi[aj, x] = 0
                for ai2 in range(d):
                    for x in range(qdim):
                        row: dict = {}
                        for y, c in lt.col(x).items():
                            vec_axpy(f, row, c, {ai2 * qdim + y: f.one})
                        for aj in range(d):
                            c = ka.entry(ai2, aj)
                            if not f.is_zero(c):
                                vec_axpy(f, row, f.neg(c), {aj * qdim + x: f.one})
                        if row:
                            conds.append(row)
            mat = Matrix(f, len(conds), d * qdim, conds)
            _, ker, _ = rref_kernel_image(mat)
            full_proj = tower.full_proj(p)
            arrays = []
            for col in ker.basis_vectors():
                rows = [dict() for _ in range(d)]
                for idx, c in col.items():
                    ai, x = divmod(idx, qdim)
                    rows[ai][x] = c
                fm = Matrix(f, d, qdim, rows)
                arrays.append(fm @ full_proj)
            space = CochainSpace(p, qdim, d, ker, tuple(arrays))
        self._cochain_spaces[p] = space
        return space

    # -- bar spaces ---------------------------------------------------------------

    def bar_dim(self, n: int) -> int:
        return self.bar_tower.dim(n)

    def bar_space(self, n: int) -> BarSpace:
        tower = self.bar_tower
        f = self.inst.field
        lmats = tuple(tower.l_mat(n, {j: f.one}) for j in range(self.inst.udim))
        return BarSpace(n, tower.full_presentation(n), tuple(tower.full_labels(n)),
                        lmats)


# ---------------------------------------------------------------------------
# hat complexes and their isomorphisms


def hat_chain_iso(spaces: InstanceSpaces, n: int):
    """M (x)_U P_n and its mutually inverse maps to the chain space.

    Returns (presentation, fwd, back) where fwd sends the class of
    m (x) (u0,...,un) to (m.u0, u1,...,un) and back is its inverse.
    """
    h, m = spaces.inst, spaces.module
    f = h.field
    bt = spaces.bar_tower
    ct = spaces.chain_tower
    pn = bt.dim(n)
    amb = m.dim * pn
    gens = []
    for u in range(h.udim):
        lu = bt.l_mat(n, {u: f.one})
        act = m.action[u]
        for mi in range(m.dim):
            for z in range(pn):
                vec: dict = {}
                acted = act.apply({mi: f.one})
                for k, c in acted.items():
                    vec[k * pn + z] = c
                for w, c in lu.col(z).items():
                    s = f.sub(vec.get(mi * pn + w, f.zero), c)
                    if f.is_zero(s):
                        vec.pop(mi * pn + w, None)
                    else:
                        vec[mi * pn + w] = s
                if vec:
                    gens.append(vec)
    pres = quotient_from_generators(f, amb, gens)

    # fwd: m (x) (u0,...,un) -> (m.u0, u1, ..., un)
    bt_full_sect = bt.full_sect(n)
    ct_full_proj = ct.full_proj(n)
    ud = h.udim
    tail_mod = ud ** n
    cols = []
    for mi in range(m.dim):
        for z in range(pn):
            full = bt_full_sect.col(z)  # inside the U^(n+1) full ambient
            out: dict = {}
            for idx, c in full.items():
                u0, tail = divmod(idx, tail_mod)
                acted = m.action[u0].apply({mi: f.one})
                for k, ck in acted.items():
                    vec_axpy(f, out, f.mul(c, ck), {k * tail_mod + tail: f.one})
            cols.append(ct_full_proj.apply(out))
    fwd = Matrix.from_cols(f, ct.dim(n), cols) @ pres.section

    # back: (m, u1,...,un) -> m (x) (1, u1, ..., un)
    one_u = h.total.unit_vector()
    ct_full_sect = ct.full_sect(n)
    bt_full_proj = bt.full_proj(n)
    cols = []
    for z in range(ct.dim(n)):
        full = ct_full_sect.col(z)
        out = {}
        for idx, c in full.items():
            mi, tail = divmod(idx, tail_mod)
            bar_full = {u0 * tail_mod + tail: f.mul(c, c0) for u0, c0 in one_u.items()}
            proj_bar = bt_full_proj.apply(bar_full)
            for w, cw in proj_bar.items():
                vec_axpy(f, out, cw, {mi * pn + w: f.one})
        cols.append(pres.project(out))
    back = Matrix.from_cols(f, pres.quotient_dim, cols)
    return pres, fwd, back


def hat_cochain_iso(spaces: InstanceSpaces, p: int):
    """U-linear functionals on P_p and the evaluation-at-(1, .) isomorphism.

    Returns (hat_basis, fwd, back): hat_basis is the subspace of U-linear
    functionals inside flattened (base_dim x P_p), fwd maps hat coordinates
    to cochain coordinates and back is its inverse.
    """
    h = spaces.inst
    f = h.field
    d = h.base.dim
    bt = spaces.bar_tower
    pdim = bt.dim(p)
    # U-linearity: phi(u.c) = u . phi(c), where u acts on A through the counit
    conds = []
    act_on_a = h.u_basis_counit_action()
    for u in range(h.udim):
        lu = bt.l_mat(p, {u: f.one})
        ka = act_on_a[u]
        for ai2 in range(d):
            for x in range(pdim):
                row: dict = {}
                for y, c in lu.col(x).items():
                    vec_axpy(f, row, c, {ai2 * pdim + y: f.one})
                for aj in range(d):
                    c = ka.entry(ai2, aj)
                    if not f.is_zero(c):
                        vec_axpy(f, row, f.neg(c), {aj * pdim + x: f.one})
                if row:
                    conds.append(row)
    mat = Matrix(f, len(conds), d * pdim, conds)
    _, hat_basis, _ = rref_kernel_image(mat)

    cochain = spaces.cochain_space(p)
    ud = h.udim
    one_u = h.total.unit_vector()
    # fwd: restrict along (u1..up) -> class of (1, u1..up)
    bt_full_proj = bt.full_proj(p)
    cols = []
    for col in hat_basis.basis_vectors():
        rows = [dict() for _ in range(d)]
        for idx, c in col.items():
            ai, x = divmod(idx, pdim)
            rows[ai][x] = c
        hat_mat = Matrix(f, d, pdim, rows)
        # functional on the full U^p ambient
        full_cols = []
        for tail in range(ud ** p):
            amb: dict = {}
            for u0, c0 in one_u.items():
                amb[u0 * (ud ** p) + tail] = c0
            full_cols.append(hat_mat.apply(bt_full_proj.apply(amb)))
        full_mat = Matrix.from_cols(f, d, full_cols)
        # express through the cochain tower quotient
        coords = _cochain_coords_from_full(spaces, p, full_mat)
        cols.append(coords)
    fwd = Matrix.from_cols(f, cochain.dim, cols)

    # back: phi -> (u0,...,up) -> u0 . phi(u1..up)
    cols = []
    for j in range(cochain.dim):
        full = cochain.full_arrays[j]  # d x ud^p
        rows = [dict() for _ in range(d)]
        bt_full_sect = bt.full_sect(p)
        for z in range(pdim):
            col = bt_full_sect.col(z)
            val: dict = {}
            for idx, c in col.items():
                u0 = idx // (ud ** p)
                tail = idx % (ud ** p)
                phi_val = full.col(tail)
                if not phi_val:
                    continue
                res = act_on_a[u0].apply(phi_val)
                vec_axpy(f, val, c, res)
            for ai, c in val.items():
                rows[ai][z] = c
        flat: dict = {}
        for ai, row in enumerate(rows):
            for x, c in row.items():
                flat[ai * pdim + x] = c
        # coordinates inside hat_basis
        from .linalg import LinearSolver

        solver = LinearSolver(hat_basis.basis.transpose())
        coords = solver.solve(flat)
        if coords is None:
            raise ValueError("dual functional is not U-linear")
        cols.append(coords)
    back = Matrix.from_cols(f, hat_basis.dim, cols)
    return hat_basis, fwd, back


def _cochain_coords_from_full(spaces: InstanceSpaces, p: int, full_mat: Matrix) -> dict:
    """Coordinates of a functional given by its full-ambient array."""
    cochain = spaces.cochain_space(p)
    f = full_mat.field
    if p == 0:
        return full_mat.col(0)
    # solve against the basis full arrays
    from .linalg import LinearSolver

    key = "_full_solver"
    solver = getattr(cochain, key, None)
    if solver is None:
        rows = []
        for arr in cochain.full_arrays:
            flat: dict = {}
            for ai, row in enumerate(arr.rows):
                for x, c in row.items():
                    flat[ai * arr.ncols + x] = c
            rows.append(flat)
        basis = Matrix(f, len(rows), cochain.base_dim * full_mat.ncols, rows)
        solver = LinearSolver(basis)
        object.__setattr__(cochain, key, solver)
    flat = {}
    for ai, row in enumerate(full_mat.rows):
        for x, c in row.items():
            flat[ai * full_mat.ncols + x] = c
    coords = solver.solve(flat)
    if coords is None:
        raise ValueError("functional does not descend to the cochain space")
    return coords
