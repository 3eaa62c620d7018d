"""Left bialgebroid and left Hopf algebroid instances with verified axioms.

Two concrete families are built here: the enveloping algebroid A (x) A^op of
a finite-dimensional algebra A, with twisted coefficients given by an
automorphism, and the group algebra of a finite group over the ground field
with trivial coefficients.

Conventions for the four actions of the base algebra A on the total algebra
U (and on right U-modules M):

    a |> u = s(a) u        u <| a = t(a) u
    a |>> u = u t(a)       u <<| a = u s(a)

Tensor quotients are materialised once per instance:

    U (x)_A U      by  t(a) u (x) v  ~  u (x) s(a) v
    U (x)_Aop U    by  u t(a) (x) v  ~  u (x) t(a) v
    U (x)_A M      by  t(a) u (x) m  ~  u (x) m.t(a)
"""
from __future__ import annotations

from dataclasses import dataclass

from .algebra import AlgebraAutomorphism, FinDimAlgebra
from .errors import NotAGroup
from .fields import QQ
from .linalg import (
    Matrix,
    QuotientPresentation,
    Subspace,
    quotient_from_generators,
    rref_kernel_image,
    vec_axpy,
)
from .report import VerificationReport, coords_counterexample

Rep = list  # list of (i, j, coeff) triples representing a two-leg tensor


def _pair(i: int, j: int, n: int) -> int:
    return i * n + j


def _triple(i: int, j: int, k: int, n: int) -> int:
    return (i * n + j) * n + k


@dataclass(frozen=True)
class AydFlags:
    is_ayd: bool
    is_stable: bool


@dataclass(frozen=True)
class ModuleComodule:
    """A right U-module carrying a compatible left U-coaction."""

    name: str
    dim: int
    labels: tuple[str, ...]
    action: tuple  # Matrix per U-basis element: m -> m . u_j
    coaction_space: QuotientPresentation  # U (x)_A M
    coaction: Matrix  # M -> coaction_space coordinates
    coaction_reps: tuple  # per basis: tuple of (u_idx, m_idx, coeff)
    twist: Matrix | None = None  # the automorphism defining a twisted coefficient

    @property
    def field(self):
        return self.coaction.field

    def action_of(self, uvec: dict) -> Matrix:
        f = self.field
        rows = [dict() for _ in range(self.dim)]
        for j, c in uvec.items():
            for i, row in enumerate(self.action[j].rows):
                for k, v in row.items():
                    s = f.add(rows[i].get(k, f.zero), f.mul(c, v))
                    if f.is_zero(s):
                        rows[i].pop(k, None)
                    else:
                        rows[i][k] = s
        return Matrix(f, self.dim, self.dim, rows)

    def act(self, mvec: dict, uvec: dict) -> dict:
        f = self.field
        out: dict = {}
        for j, c in uvec.items():
            vec_axpy(f, out, c, self.action[j].apply(mvec))
        return out


@dataclass(frozen=True)
class HopfAlgebroidInstance:
    """Structure data of a left Hopf algebroid over a finite-dimensional base."""

    name: str
    kind: str  # "enveloping" | "group_algebra"
    base: FinDimAlgebra
    total: FinDimAlgebra
    eta: Matrix  # (A (x) A^op) coordinates -> U
    source: Matrix  # A -> U
    target: Matrix  # A -> U
    counit: Matrix  # U -> A
    coproduct_space: QuotientPresentation  # U (x)_A U
    coproduct: Matrix  # U -> coproduct_space coordinates
    coproduct_reps: tuple  # ambient representatives, per U-basis
    translation_space: QuotientPresentation  # U (x)_Aop U
    translation: Matrix
    translation_reps: tuple

    @property
    def field(self):
        return self.counit.field

    @property
    def udim(self) -> int:
        return self.total.dim

    # -- base actions on U -------------------------------------------------

    def s_vec(self, avec: dict) -> dict:
        return self.source.apply(avec)

    def t_vec(self, avec: dict) -> dict:
        return self.target.apply(avec)

    def act_left_s(self, avec: dict) -> Matrix:
        """a |> u = s(a) u."""
        return self.total.left_mult_matrix(self.s_vec(avec))

    def act_left_t(self, avec: dict) -> Matrix:
        """u <| a = t(a) u."""
        return self.total.left_mult_matrix(self.t_vec(avec))

    def act_right_t(self, avec: dict) -> Matrix:
        """a |>> u = u t(a)."""
        return self.total.right_mult_matrix(self.t_vec(avec))

    def act_right_s(self, avec: dict) -> Matrix:
        """u <<| a = u s(a)."""
        return self.total.right_mult_matrix(self.s_vec(avec))

    def counit_action(self, uvec: dict, avec: dict) -> dict:
        """The left U-module structure on A: u . a = eps(u s(a))."""
        prod = self.total.multiply(uvec, self.s_vec(avec))
        return self.counit.apply(prod)

    def u_basis_counit_action(self) -> list[Matrix]:
        """Matrix of a -> u_j . a for every U-basis element."""
        f = self.field
        out = []
        for j in range(self.udim):
            cols = [self.counit_action({j: f.one}, {i: f.one}) for i in range(self.base.dim)]
            out.append(Matrix.from_cols(f, self.base.dim, cols))
        return out


# ---------------------------------------------------------------------------
# builders


def _tensor_square_quotients(total: FinDimAlgebra, source: Matrix, target: Matrix):
    """The quotients U (x)_A U and U (x)_Aop U with their relation spans."""
    f = total.field
    n = total.dim
    amb = n * n
    gens_a = []
    gens_op = []
    for ai in range(source.ncols):
        av = {ai: f.one}
        svec = source.apply(av)
        tvec = target.apply(av)
        lt = total.left_mult_matrix(tvec)
        ls = total.left_mult_matrix(svec)
        rt = total.right_mult_matrix(tvec)
        for u in range(n):
            tu = lt.apply({u: f.one})
            ut = rt.apply({u: f.one})
            for v in range(n):
                sv = ls.apply({v: f.one})
                tv = lt.apply({v: f.one})
                vec: dict = {}
                for i, c in tu.items():
                    vec[_pair(i, v, n)] = c
                for j, c in sv.items():
                    vec_axpy(f, vec, f.neg(c), {_pair(u, j, n): f.one})
                if vec:
                    gens_a.append(vec)
                vec = {}
                for i, c in ut.items():
                    vec[_pair(i, v, n)] = c
                for j, c in tv.items():
                    vec_axpy(f, vec, f.neg(c), {_pair(u, j, n): f.one})
                if vec:
                    gens_op.append(vec)
    q_a = quotient_from_generators(f, amb, gens_a)
    q_op = quotient_from_generators(f, amb, gens_op)
    return q_a, q_op


def _reps_from_matrix(space: QuotientPresentation, mat: Matrix, n: int):
    """Ambient two-leg representatives of each column of a quotient-valued map."""
    reps = []
    for j in range(mat.ncols):
        amb = space.lift(mat.col(j))
        reps.append(tuple((idx // n, idx % n, c) for idx, c in sorted(amb.items())))
    return tuple(reps)


def build_enveloping(a: FinDimAlgebra, sigma: AlgebraAutomorphism, name="enveloping"):
    """The enveloping algebroid of A with twisted coefficients.

    Returns the instance on U = A (x) A^op together with the coefficient
    module-comodule: A itself with right action m.(a (x) b) = b m sigma(a)
    and coaction m -> (m (x) 1) (x) 1.
    """
    f = a.field
    d = a.dim
    n = d * d
    labels = tuple(f"{a.labels[i]}(x){a.labels[j]}" for i in range(d) for j in range(d))

    def umult(i1, j1, i2, j2):
        # (e_i1 (x) e_j1)(e_i2 (x) e_j2) = e_i1 e_i2 (x) e_j2 e_j1
        left = a.mult[i1][i2]
        right = a.mult[j2][j1]
        out = {}
        for r, c1 in left.items():
            for s_, c2 in right.items():
                out[_pair(r, s_, d)] = f.mul(c1, c2)
        return out

    mult = tuple(
        tuple(umult(i1, j1, i2, j2) for i2 in range(d) for j2 in range(d))
        for i1 in range(d)
        for j1 in range(d)
    )
    one = a.unit_vector()
    unit_vec: dict = {}
    for i, ci in one.items():
        for j, cj in one.items():
            unit_vec[_pair(i, j, d)] = f.mul(ci, cj)
    total = FinDimAlgebra(f, n, labels, mult, tuple(sorted(unit_vec.items())))

    eta = Matrix.identity(f, n)
    source = Matrix.from_cols(
        f, n, [{_pair(i, j, d): cj for j, cj in one.items()} for i in range(d)]
    )
    target = Matrix.from_cols(
        f, n, [{_pair(i, j, d): ci for i, ci in one.items()} for j in range(d)]
    )
    counit_cols = [a.mult[i][j] for i in range(d) for j in range(d)]
    counit = Matrix.from_cols(f, d, counit_cols)

    q_a, q_op = _tensor_square_quotients(total, source, target)

    cop_cols = []
    tau_cols = []
    for i in range(d):
        for j in range(d):
            # Delta(e_i (x) e_j) = (e_i (x) 1) (x)_A (1 (x) e_j)
            amb: dict = {}
            for k, ck in one.items():
                for l, cl in one.items():
                    amb[_pair(_pair(i, k, d), _pair(l, j, d), n)] = f.mul(ck, cl)
            cop_cols.append(q_a.project(amb))
            # translation: (e_i (x) e_j)  ->  (e_i (x) 1) (x)_Aop (e_j (x) 1)
            amb = {}
            for k, ck in one.items():
                for l, cl in one.items():
                    amb[_pair(_pair(i, k, d), _pair(j, l, d), n)] = f.mul(ck, cl)
            tau_cols.append(q_op.project(amb))
    coproduct = Matrix.from_cols(f, q_a.quotient_dim, cop_cols)
    translation = Matrix.from_cols(f, q_op.quotient_dim, tau_cols)

    inst = HopfAlgebroidInstance(
        name=name,
        kind="enveloping",
        base=a,
        total=total,
        eta=eta,
        source=source,
        target=target,
        counit=counit,
        coproduct_space=q_a,
        coproduct=coproduct,
        coproduct_reps=_reps_from_matrix(q_a, coproduct, n),
        translation_space=q_op,
        translation=translation,
        translation_reps=_reps_from_matrix(q_op, translation, n),
    )

    # coefficients: A with m.(a (x) b) = b m sigma(a)
    act = []
    for i in range(d):
        for j in range(d):
            sig_i = sigma.apply({i: f.one})
            cols = [a.multiply(a.multiply({j: f.one}, {m: f.one}), sig_i) for m in range(d)]
            act.append(Matrix.from_cols(f, d, cols))
    module = _module_with_coaction(
        inst,
        name="A_sigma",
        dim=d,
        labels=a.labels,
        action=tuple(act),
        coaction_amb=lambda m: {
            _pair(_pair(m, k, d), l, d): f.mul(ck, cl)
            for k, ck in one.items()
            for l, cl in one.items()
        },
        twist=sigma.matrix,
    )
    return inst, module


def _module_with_coaction(inst, name, dim, labels, action, coaction_amb, twist=None):
    """Assemble a ModuleComodule, materialising U (x)_A M."""
    f = inst.field
    n = inst.udim
    amb_dim = n * dim
    gens = []
    for ai in range(inst.base.dim):
        av = {ai: f.one}
        lt = inst.act_left_t(av)
        tv = inst.t_vec(av)
        for u in range(n):
            tu = lt.apply({u: f.one})
            for m in range(dim):
                mv: dict = {}
                for j, c in tu.items():
                    mv[_pair(j, m, dim)] = c
                # m . t(a) on the module side
                acted: dict = {}
                for j, c in tv.items():
                    vec_axpy(f, acted, c, action[j].apply({m: f.one}))
                for k, c in acted.items():
                    vec_axpy(f, mv, f.neg(c), {_pair(u, k, dim): f.one})
                if mv:
                    gens.append(mv)
    space = quotient_from_generators(f, amb_dim, gens)
    cols = [space.project(coaction_amb(m)) for m in range(dim)]
    coaction = Matrix.from_cols(f, space.quotient_dim, cols)
    reps = []
    for j in range(dim):
        amb = space.lift(coaction.col(j))
        reps.append(tuple((idx // dim, idx % dim, c) for idx, c in sorted(amb.items())))
    return ModuleComodule(name, dim, tuple(labels), tuple(action), space, coaction,
                          tuple(reps), twist)


def validate_group_table(table) -> int:
    """Check a multiplication table defines a group; returns the identity index."""
    m = len(table)
    for row in table:
        if len(row) != m or any(not (0 <= x < m) for x in row):
            raise NotAGroup("table is not square over valid indices")
    ident = None
    for e in range(m):
        if all(table[e][j] == j and table[j][e] == j for j in range(m)):
            ident = e
            break
    if ident is None:
        raise NotAGroup("no identity element")
    for i in range(m):
        for j in range(m):
            for k in range(m):
                if table[table[i][j]][k] != table[i][table[j][k]]:
                    raise NotAGroup(f"associativity fails at ({i},{j},{k})")
    for i in range(m):
        if not any(table[i][j] == ident and table[j][i] == ident for j in range(m)):
            raise NotAGroup(f"element {i} has no inverse")
    return ident


def build_hopf_over_k(field, group_table, labels=None, name="group"):
    """The group algebra of a finite group as a Hopf algebroid over the field.

    The coproduct is g -> g (x) g, the counit sends every group element to 1,
    and the translation map is g -> g (x) g^{-1}.  Coefficients are the
    trivial module with coaction m -> 1 (x) m.
    """
    f = field
    ident = validate_group_table(group_table)
    m = len(group_table)
    if labels is None:
        labels = tuple(f"g{i}" for i in range(m))
    inverse = [None] * m
    for i in range(m):
        for j in range(m):
            if group_table[i][j] == ident and group_table[j][i] == ident:
                inverse[i] = j
                break

    base = FinDimAlgebra.from_structure_constants(f, 1, ("1",), [[[f.one]]], [f.one])
    mult = tuple(
        tuple({group_table[i][j]: f.one} for j in range(m)) for i in range(m)
    )
    total = FinDimAlgebra(f, m, tuple(labels), mult, ((ident, f.one),))

    eta = Matrix.from_cols(f, m, [{ident: f.one}])
    source = Matrix.from_cols(f, m, [{ident: f.one}])
    target = source
    counit = Matrix(f, 1, m, [{j: f.one for j in range(m)}])

    q_a, q_op = _tensor_square_quotients(total, source, target)
    cop_cols = [q_a.project({_pair(g, g, m): f.one}) for g in range(m)]
    tau_cols = [q_op.project({_pair(g, inverse[g], m): f.one}) for g in range(m)]
    coproduct = Matrix.from_cols(f, q_a.quotient_dim, cop_cols)
    translation = Matrix.from_cols(f, q_op.quotient_dim, tau_cols)

    inst = HopfAlgebroidInstance(
        name=name,
        kind="group_algebra",
        base=base,
        total=total,
        eta=eta,
        source=source,
        target=target,
        counit=counit,
        coproduct_space=q_a,
        coproduct=coproduct,
        coproduct_reps=_reps_from_matrix(q_a, coproduct, m),
        translation_space=q_op,
        translation=translation,
        translation_reps=_reps_from_matrix(q_op, translation, m),
    )
    # trivial module k: m.g = m, coaction m -> 1 (x) m
    action = tuple(Matrix.identity(f, 1) for _ in range(m))
    module = _module_with_coaction(
        inst, name="k_triv", dim=1, labels=("1",), action=action,
        coaction_amb=lambda _m: {_pair(ident, 0, 1): f.one},
    )
    return inst, module


# ---------------------------------------------------------------------------
# axiom checks


def takeuchi_subspace_cop(h: HopfAlgebroidInstance) -> Subspace:
    """Elements w of U (x)_A U with (a|>>)w = w(<<|a) for all a."""
    f = h.field
    q = h.coproduct_space
    ident = Matrix.identity(f, h.udim)
    conds = []
    for ai in range(h.base.dim):
        av = {ai: f.one}
        op = h.act_right_t(av).kron(ident) - ident.kron(h.act_right_s(av))
        conds.append(q.projection @ op @ q.section)
    return _stacked_kernel(conds, q.quotient_dim)


def takeuchi_subspace_tr(h: HopfAlgebroidInstance) -> Subspace:
    """Elements w of U (x)_Aop U with (<|a)w on leg 1 equal to (a|>>)w on leg 2."""
    f = h.field
    q = h.translation_space
    ident = Matrix.identity(f, h.udim)
    conds = []
    for ai in range(h.base.dim):
        av = {ai: f.one}
        op = h.act_left_t(av).kron(ident) - ident.kron(h.act_right_t(av))
        conds.append(q.projection @ op @ q.section)
    return _stacked_kernel(conds, q.quotient_dim)


def comodule_induced_right_action(h: HopfAlgebroidInstance, m: ModuleComodule,
                                  avec: dict) -> Matrix:
    """The right A-action a comodule induces: m <<| a = eps(m_(-1) s(a)) |>> m_(0)."""
    f = h.field
    sa = h.s_vec(avec)
    cols = []
    for i in range(m.dim):
        out: dict = {}
        for u, mi, c in m.coaction_reps[i]:
            scal = h.counit.apply(h.total.multiply({u: f.one}, sa))
            ta = h.t_vec(scal)
            vec_axpy(f, out, c, m.act({mi: f.one}, ta))
        cols.append(out)
    return Matrix.from_cols(f, m.dim, cols)


def takeuchi_subspace_coact(h: HopfAlgebroidInstance, m: ModuleComodule) -> Subspace:
    f = h.field
    q = m.coaction_space
    idu = Matrix.identity(f, h.udim)
    conds = []
    for ai in range(h.base.dim):
        av = {ai: f.one}
        m_act = comodule_induced_right_action(h, m, av)
        op = h.act_right_t(av).kron(Matrix.identity(f, m.dim)) - idu.kron(m_act)
        conds.append(q.projection @ op @ q.section)
    return _stacked_kernel(conds, q.quotient_dim)


def _stacked_kernel(mats: list[Matrix], ncols: int) -> Subspace:
    if not mats:
        return Subspace.full(QQ, ncols)
    f = mats[0].field
    rows = []
    for mtx in mats:
        rows.extend(mtx.rows)
    stacked = Matrix(f, len(rows), ncols, [dict(r) for r in rows])
    _, ker, _ = rref_kernel_image(stacked)
    return ker


def _two_leg_vec(f, reps, n: int, transform=None) -> dict:
    out: dict = {}
    for i, j, c in reps:
        if transform is None:
            vec_axpy(f, out, c, {_pair(i, j, n): f.one})
        else:
            vec_axpy(f, out, c, transform(i, j))
    return out


def check_bialgebroid(h: HopfAlgebroidInstance) -> VerificationReport:
    """Counit laws, coassociativity, Takeuchi membership, multiplicativity."""
    rep = VerificationReport()
    f = h.field
    n = h.udim
    one_u = h.total.unit_vector()

    # eta is a k-algebra map; s, t are its restrictions
    d = h.base.dim
    if h.eta.ncols == d * d:
        ok = True
        for i1 in range(d):
            for j1 in range(d):
                for i2 in range(d):
                    for j2 in range(d):
                        # (a (x) b)(a' (x) b') = a a' (x) b' b
                        left = h.base.mult[i1][i2]
                        right = h.base.mult[j2][j1]
                        amb: dict = {}
                        for r, c1 in left.items():
                            for s_, c2 in right.items():
                                vec_axpy(f, amb, f.mul(c1, c2),
                                         h.eta.col(_pair(r, s_, d)))
                        prod = h.total.multiply(h.eta.col(_pair(i1, j1, d)),
                                                h.eta.col(_pair(i2, j2, d)))
                        if amb != prod:
                            ok = False
        rep.record(ok, "eta_algebra_map", "eta multiplicative on A (x) A^op",
                   h.name)
    ok = h.counit.apply(one_u) == h.base.unit_vector()
    rep.record(ok, "counit_of_unit", "eps(1) = 1", h.name)
    ok = h.coproduct.apply(one_u) == h.coproduct_space.project(
        _two_leg_vec(f, [(i, j, f.mul(ci, cj)) for i, ci in one_u.items()
                         for j, cj in one_u.items()], n))
    rep.record(ok, "coproduct_of_unit", "Delta(1) = 1 (x) 1", h.name)

    # counit laws: s(eps(u1)) u2 = u = t(eps(u2)) u1
    ok_l = ok_r = True
    bad = None
    for u in range(n):
        left: dict = {}
        right: dict = {}
        for i, j, c in h.coproduct_reps[u]:
            se = h.s_vec(h.counit.apply({i: f.one}))
            vec_axpy(f, left, c, h.total.multiply(se, {j: f.one}))
            te = h.t_vec(h.counit.apply({j: f.one}))
            vec_axpy(f, right, c, h.total.multiply(te, {i: f.one}))
        if left != {u: f.one}:
            ok_l = False
            bad = u
        if right != {u: f.one}:
            ok_r = False
            bad = u
    witness = None if bad is None else {"basis": h.total.labels[bad]}
    rep.record(ok_l, "counit_law_left", "s(eps(u_(1))) u_(2) = u", h.name,
               counterexample=witness)
    rep.record(ok_r, "counit_law_right", "t(eps(u_(2))) u_(1) = u", h.name,
               counterexample=witness)

    # counit action law: eps(u s(eps(v))) = eps(uv) = eps(u t(eps(v)))
    ok = True
    for u in range(n):
        for v in range(n):
            uv = h.total.mult[u][v]
            ev = h.counit.apply({v: f.one})
            lhs = h.counit.apply(h.total.multiply({u: f.one}, h.s_vec(ev)))
            rhs = h.counit.apply(h.total.multiply({u: f.one}, h.t_vec(ev)))
            mid = h.counit.apply(uv)
            if lhs != mid or rhs != mid:
                ok = False
    rep.record(ok, "counit_module_law", "eps(u s(eps v)) = eps(uv) = eps(u t(eps v))",
               h.name)

    # coassociativity in U (x)_A U (x)_A U
    amb3 = n * n * n
    gens = []
    for ai in range(h.base.dim):
        av = {ai: f.one}
        lt = h.act_left_t(av)
        ls = h.act_left_s(av)
        for x in range(n):
            tx = lt.apply({x: f.one})
            for y in range(n):
                sy = ls.apply({y: f.one})
                ty = lt.apply({y: f.one})
                for z in range(n):
                    sz = ls.apply({z: f.one})
                    vec: dict = {}
                    for i, c in tx.items():
                        vec[_triple(i, y, z, n)] = c
                    for j, c in sy.items():
                        vec_axpy(f, vec, f.neg(c), {_triple(x, j, z, n): f.one})
                    if vec:
                        gens.append(vec)
                    vec = {}
                    for j, c in ty.items():
                        vec[_triple(x, j, z, n)] = c
                    for k, c in sz.items():
                        vec_axpy(f, vec, f.neg(c), {_triple(x, y, k, n): f.one})
                    if vec:
                        gens.append(vec)
    q3 = quotient_from_generators(f, amb3, gens)
    ok = True
    for u in range(n):
        lhs: dict = {}
        rhs: dict = {}
        for i, j, c in h.coproduct_reps[u]:
            for i1, i2, c2 in h.coproduct_reps[i]:
                vec_axpy(f, lhs, f.mul(c, c2), {_triple(i1, i2, j, n): f.one})
            for j1, j2, c2 in h.coproduct_reps[j]:
                vec_axpy(f, rhs, f.mul(c, c2), {_triple(i, j1, j2, n): f.one})
        if q3.project(lhs) != q3.project(rhs):
            ok = False
    rep.record(ok, "coproduct_coassociative",
               "(Delta (x) id) Delta = (id (x) Delta) Delta", h.name)

    # image of Delta inside the Takeuchi subspace
    tak = takeuchi_subspace_cop(h)
    ok = all(tak.contains_vec(h.coproduct.col(u)) for u in range(n))
    rep.record(ok, "coproduct_takeuchi",
               "(a |>>) Delta(u) = Delta(u) (<<| a)", h.name)

    # multiplicativity Delta(uv) = Delta(u) Delta(v)
    ok = True
    witness = None
    for u in range(n):
        for v in range(n):
            uv = h.total.mult[u][v]
            lhs: dict = {}
            for w, c in uv.items():
                vec_axpy(f, lhs, c, h.coproduct.col(w))
            amb: dict = {}
            for i1, j1, c1 in h.coproduct_reps[u]:
                for i2, j2, c2 in h.coproduct_reps[v]:
                    p1 = h.total.mult[i1][i2]
                    p2 = h.total.mult[j1][j2]
                    cc = f.mul(c1, c2)
                    for r, cr in p1.items():
                        for s_, cs in p2.items():
                            vec_axpy(f, amb, f.mul(cc, f.mul(cr, cs)),
                                     {_pair(r, s_, n): f.one})
            if h.coproduct_space.project(amb) != lhs:
                ok = False
                witness = {"pair": [h.total.labels[u], h.total.labels[v]]}
    rep.record(ok, "coproduct_multiplicative", "Delta(uv) = Delta(u) Delta(v)",
               h.name, counterexample=witness)
    return rep


def check_left_hopf(h: HopfAlgebroidInstance) -> VerificationReport:
    """The translation-map identities of a left Hopf algebroid, on the basis."""
    rep = VerificationReport()
    f = h.field
    n = h.udim
    one_u = h.total.unit_vector()

    def fail_witness(u):
        return {"basis": h.total.labels[u]}

    # (1) image inside the (x)_Aop Takeuchi subspace
    tak = takeuchi_subspace_tr(h)
    ok = all(tak.contains_vec(h.translation.col(u)) for u in range(n))
    rep.record(ok, "translation_takeuchi", "u+ (x) u- lands in U x_Aop U", h.name)

    # (2) u+(1) (x) u+(2) u-  =  u (x) 1   in U (x)_A U
    ok = True
    witness = None
    for u in range(n):
        amb: dict = {}
        for p, m_, c in h.translation_reps[u]:
            for p1, p2, c2 in h.coproduct_reps[p]:
                prod = h.total.mult[p2][m_]
                for w, cw in prod.items():
                    vec_axpy(f, amb, f.mul(f.mul(c, c2), cw), {_pair(p1, w, n): f.one})
        tgt: dict = {}
        for j, cj in one_u.items():
            tgt[_pair(u, j, n)] = cj
        if h.coproduct_space.project(amb) != h.coproduct_space.project(tgt):
            ok = False
            witness = fail_witness(u)
    rep.record(ok, "galois_right_inverse", "u+(1) (x) u+(2) u- = u (x) 1",
               h.name, counterexample=witness)

    # (3) u(1)+ (x) u(1)- u(2)  =  u (x) 1   in U (x)_Aop U
    ok = True
    witness = None
    for u in range(n):
        amb = {}
        for u1, u2, c in h.coproduct_reps[u]:
            for p, m_, c2 in h.translation_reps[u1]:
                prod = h.total.mult[m_][u2]
                for w, cw in prod.items():
                    vec_axpy(f, amb, f.mul(f.mul(c, c2), cw), {_pair(p, w, n): f.one})
        tgt = {}
        for j, cj in one_u.items():
            tgt[_pair(u, j, n)] = cj
        if h.translation_space.project(amb) != h.translation_space.project(tgt):
            ok = False
            witness = fail_witness(u)
    rep.record(ok, "galois_left_inverse", "u(1)+ (x) u(1)- u(2) = u (x) 1",
               h.name, counterexample=witness)

    # mixed three-leg quotients
    amb3 = n * n * n
    gens_a_op = []  # legs (1,2) over A, legs (2,3) over Aop
    gens_op_a = []  # legs (1,2) over Aop, legs (2,3) over A
    for ai in range(h.base.dim):
        av = {ai: f.one}
        lt, ls, rt = h.act_left_t(av), h.act_left_s(av), h.act_right_t(av)
        for x in range(n):
            for y in range(n):
                for z in range(n):
                    # (x)_A between legs 1,2
                    vec: dict = {}
                    for i, c in lt.apply({x: f.one}).items():
                        vec[_triple(i, y, z, n)] = c
                    for j, c in ls.apply({y: f.one}).items():
                        vec_axpy(f, vec, f.neg(c), {_triple(x, j, z, n): f.one})
                    if vec:
                        gens_a_op.append(dict(vec))
                    # (x)_Aop between legs 2,3
                    vec = {}
                    for j, c in rt.apply({y: f.one}).items():
                        vec[_triple(x, j, z, n)] = c
                    for k, c in lt.apply({z: f.one}).items():
                        vec_axpy(f, vec, f.neg(c), {_triple(x, y, k, n): f.one})
                    if vec:
                        gens_a_op.append(dict(vec))
                    # (x)_Aop between legs 1,2
                    vec = {}
                    for i, c in rt.apply({x: f.one}).items():
                        vec[_triple(i, y, z, n)] = c
                    for j, c in lt.apply({y: f.one}).items():
                        vec_axpy(f, vec, f.neg(c), {_triple(x, j, z, n): f.one})
                    if vec:
                        gens_op_a.append(dict(vec))
                    # (x)_A between legs 2,3
                    vec = {}
                    for j, c in lt.apply({y: f.one}).items():
                        vec[_triple(x, j, z, n)] = c
                    for k, c in ls.apply({z: f.one}).items():
                        vec_axpy(f, vec, f.neg(c), {_triple(x, y, k, n): f.one})
                    if vec:
                        gens_op_a.append(dict(vec))
    q_a_op = quotient_from_generators(f, amb3, gens_a_op)
    q_op_a = quotient_from_generators(f, amb3, gens_op_a)

    # (4) u+(1) (x) u+(2) (x) u- = u(1) (x) u(2)+ (x) u(2)-
    ok = True
    witness = None
    for u in range(n):
        lhs: dict = {}
        for p, m_, c in h.translation_reps[u]:
            for p1, p2, c2 in h.coproduct_reps[p]:
                vec_axpy(f, lhs, f.mul(c, c2), {_triple(p1, p2, m_, n): f.one})
        rhs: dict = {}
        for u1, u2, c in h.coproduct_reps[u]:
            for p, m_, c2 in h.translation_reps[u2]:
                vec_axpy(f, rhs, f.mul(c, c2), {_triple(u1, p, m_, n): f.one})
        if q_a_op.project(lhs) != q_a_op.project(rhs):
            ok = False
            witness = fail_witness(u)
    rep.record(ok, "translation_coproduct_exchange",
               "u+(1) (x) u+(2) (x) u- = u(1) (x) u(2)+ (x) u(2)-",
               h.name, counterexample=witness)

    # (5) u+ (x) u-(1) (x) u-(2) = u++ (x) u- (x) u+-
    ok = True
    witness = None
    for u in range(n):
        lhs = {}
        for p, m_, c in h.translation_reps[u]:
            for m1, m2, c2 in h.coproduct_reps[m_]:
                vec_axpy(f, lhs, f.mul(c, c2), {_triple(p, m1, m2, n): f.one})
        rhs = {}
        for p, m_, c in h.translation_reps[u]:
            for pp, pm, c2 in h.translation_reps[p]:
                vec_axpy(f, rhs, f.mul(c, c2), {_triple(pp, m_, pm, n): f.one})
        if q_op_a.project(lhs) != q_op_a.project(rhs):
            ok = False
            witness = fail_witness(u)
    rep.record(ok, "translation_double",
               "u+ (x) u-(1) (x) u-(2) = u++ (x) u- (x) u+-",
               h.name, counterexample=witness)

    # (6) (uv)+ (x) (uv)- = u+ v+ (x) v- u-
    ok = True
    witness = None
    for u in range(n):
        for v in range(n):
            uv = h.total.mult[u][v]
            lhs: dict = {}
            for w, c in uv.items():
                vec_axpy(f, lhs, c, h.translation.col(w))
            amb: dict = {}
            for p1, m1, c1 in h.translation_reps[u]:
                for p2, m2, c2 in h.translation_reps[v]:
                    plus = h.total.mult[p1][p2]
                    minus = h.total.mult[m2][m1]
                    cc = f.mul(c1, c2)
                    for r, cr in plus.items():
                        for s_, cs in minus.items():
                            vec_axpy(f, amb, f.mul(cc, f.mul(cr, cs)),
                                     {_pair(r, s_, n): f.one})
            if h.translation_space.project(amb) != lhs:
                ok = False
                witness = {"pair": [h.total.labels[u], h.total.labels[v]]}
    rep.record(ok, "translation_antimultiplicative",
               "(uv)+ (x) (uv)- = u+ v+ (x) v- u-", h.name, counterexample=witness)

    # (7) u+ u- = s(eps(u))
    ok = True
    witness = None
    for u in range(n):
        total: dict = {}
        for p, m_, c in h.translation_reps[u]:
            vec_axpy(f, total, c, h.total.mult[p][m_])
        want = h.s_vec(h.counit.apply({u: f.one}))
        if total != want:
            ok = False
            witness = fail_witness(u)
    rep.record(ok, "translation_counit_product", "u+ u- = s(eps(u))",
               h.name, counterexample=witness)

    # (8) eps(u-) |>> u+ = u, i.e. u+ t(eps(u-)) = u
    ok = True
    witness = None
    for u in range(n):
        total = {}
        for p, m_, c in h.translation_reps[u]:
            te = h.t_vec(h.counit.apply({m_: f.one}))
            vec_axpy(f, total, c, h.total.multiply({p: f.one}, te))
        if total != {u: f.one}:
            ok = False
            witness = fail_witness(u)
    rep.record(ok, "translation_counit_recovery", "u+ t(eps(u-)) = u",
               h.name, counterexample=witness)

    # (9) (s(a) t(b))+ (x) (s(a) t(b))- = s(a) (x) s(b)
    ok = True
    witness = None
    for ai in range(h.base.dim):
        for bi in range(h.base.dim):
            sa = h.s_vec({ai: f.one})
            tb = h.t_vec({bi: f.one})
            u = h.total.multiply(sa, tb)
            lhs: dict = {}
            for w, c in u.items():
                vec_axpy(f, lhs, c, h.translation.col(w))
            sb = h.s_vec({bi: f.one})
            amb = {}
            for i, ci in sa.items():
                for j, cj in sb.items():
                    amb[_pair(i, j, n)] = f.mul(ci, cj)
            if h.translation_space.project(amb) != lhs:
                ok = False
                witness = {"pair": [h.base.labels[ai], h.base.labels[bi]]}
    rep.record(ok, "translation_on_source_target",
               "(s(a)t(b))+ (x) (s(a)t(b))- = s(a) (x) s(b)",
               h.name, counterexample=witness)
    return rep


def check_module_comodule(h: HopfAlgebroidInstance, m: ModuleComodule):
    """Module, comodule, and compatibility axioms; returns (report, flags)."""
    rep = VerificationReport()
    f = h.field
    n = h.udim
    dm = m.dim

    # right action: associative and unital
    ok = True
    one_u = h.total.unit_vector()
    for i in range(dm):
        mv = {i: f.one}
        if m.act(mv, one_u) != mv:
            ok = False
        for u in range(n):
            for v in range(n):
                lhs = m.act(m.act(mv, {u: f.one}), {v: f.one})
                rhs = m.act(mv, h.total.mult[u][v])
                if lhs != rhs:
                    ok = False
    rep.record(ok, "module_action_laws", "(m.u).v = m.(uv), m.1 = m", h.name)

    # counitality: m_(0) t(eps(m_(-1))) = m
    ok = True
    for i in range(dm):
        out: dict = {}
        for u, mi, c in m.coaction_reps[i]:
            te = h.t_vec(h.counit.apply({u: f.one}))
            vec_axpy(f, out, c, m.act({mi: f.one}, te))
        if out != {i: f.one}:
            ok = False
    rep.record(ok, "coaction_counital", "eps(m_(-1)) |> m_(0) = m", h.name)

    # coassociativity in U (x)_A U (x)_A M
    amb3 = n * n * dm
    gens = []
    for ai in range(h.base.dim):
        av = {ai: f.one}
        lt, ls = h.act_left_t(av), h.act_left_s(av)
        t_act = m.action_of(h.t_vec(av))
        for x in range(n):
            for y in range(n):
                for z in range(dm):
                    vec: dict = {}
                    for i, c in lt.apply({x: f.one}).items():
                        vec[(i * n + y) * dm + z] = c
                    for j, c in ls.apply({y: f.one}).items():
                        vec_axpy(f, vec, f.neg(c), {(x * n + j) * dm + z: f.one})
                    if vec:
                        gens.append(vec)
                    vec = {}
                    for j, c in lt.apply({y: f.one}).items():
                        vec[(x * n + j) * dm + z] = c
                    for k, c in t_act.apply({z: f.one}).items():
                        vec_axpy(f, vec, f.neg(c), {(x * n + y) * dm + k: f.one})
                    if vec:
                        gens.append(vec)
    q3 = quotient_from_generators(f, amb3, gens)
    ok = True
    for i in range(dm):
        lhs: dict = {}
        rhs: dict = {}
        for u, mi, c in m.coaction_reps[i]:
            for u1, u2, c2 in h.coproduct_reps[u]:
                vec_axpy(f, lhs, f.mul(c, c2), {(u1 * n + u2) * dm + mi: f.one})
            for v, mj, c2 in m.coaction_reps[mi]:
                vec_axpy(f, rhs, f.mul(c, c2), {(u * n + v) * dm + mj: f.one})
        if q3.project(lhs) != q3.project(rhs):
            ok = False
    rep.record(ok, "coaction_coassociative",
               "(Delta (x) id) coaction = (id (x) coaction) coaction", h.name)

    # Takeuchi membership
    tak = takeuchi_subspace_coact(h, m)
    ok = all(tak.contains_vec(m.coaction.col(i)) for i in range(dm))
    rep.record(ok, "coaction_takeuchi", "coaction lands in U x_A M", h.name)

    # coaction is left A-linear for the induced action a |>> m = m.t(a)
    ok = True
    for ai in range(h.base.dim):
        av = {ai: f.one}
        t_act = m.action_of(h.t_vec(av))
        ls = h.act_left_s(av)
        idm = Matrix.identity(f, dm)
        lhs = m.coaction @ t_act
        rhs = (m.coaction_space.projection @ ls.kron(idm)
               @ m.coaction_space.section) @ m.coaction
        if lhs != rhs:
            ok = False
    rep.record(ok, "coaction_left_a_linear",
               "coaction(a |>> m) = (a |> (x) id) coaction(m)", h.name)

    # aYD: the module and comodule A^e-structures coincide and the
    # compatibility equation holds; evaluated, not required
    structures_match = True
    for ai in range(h.base.dim):
        av = {ai: f.one}
        if m.action_of(h.s_vec(av)) != comodule_induced_right_action(h, m, av):
            structures_match = False
    is_ayd = structures_match
    for i in range(dm):
        for u in range(n):
            mu = m.act({i: f.one}, {u: f.one})
            lhs: dict = {}
            for w, c in mu.items():
                vec_axpy(f, lhs, c, m.coaction.col(w))
            amb: dict = {}
            for p, mn_, c1 in h.translation_reps[u]:
                for p1, p2, c2 in h.coproduct_reps[p]:
                    for v, mi, c3 in m.coaction_reps[i]:
                        # u- m_(-1) u+(1)  (x)  m_(0) u+(2)
                        uleg = h.total.multiply(h.total.multiply({mn_: f.one}, {v: f.one}),
                                                {p1: f.one})
                        mleg = m.act({mi: f.one}, {p2: f.one})
                        ccc = f.mul(f.mul(c1, c2), c3)
                        for r, cr in uleg.items():
                            for s_, cs in mleg.items():
                                vec_axpy(f, amb, f.mul(ccc, f.mul(cr, cs)),
                                         {r * dm + s_: f.one})
            if m.coaction_space.project(amb) != lhs:
                is_ayd = False
    rep.record(True, "anti_yetter_drinfeld_evaluated",
               f"coaction(mu) = u- m_(-1) u+(1) (x) m_(0) u+(2) is {str(is_ayd).lower()}",
               h.name)

    # stability: m_(0) m_(-1) = m
    is_stable = True
    for i in range(dm):
        out = {}
        for u, mi, c in m.coaction_reps[i]:
            vec_axpy(f, out, c, m.act({mi: f.one}, {u: f.one}))
        if out != {i: f.one}:
            is_stable = False
    rep.record(True, "stability_evaluated",
               f"m_(0) m_(-1) = m is {str(is_stable).lower()}", h.name)

    return rep, AydFlags(is_ayd=is_ayd, is_stable=is_stable)
