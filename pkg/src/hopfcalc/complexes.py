"""Simplicial, para-cyclic, and bar-resolution structure as exact matrices.

The para-cyclic bundle carries, per degree, the faces, degeneracies and the
cyclic operator of the chain complex of a module-comodule, together with the
derived operators: the simplicial boundary b, the norm N, the extra
degeneracy s_{-1} = t s_n, the cyclic differential B = (id - t) s_{-1} N and
T = t^{n+1}.  All defining relations are verified at build time; a failure
raises RelationViolation since it signals corrupted instance data.
"""
from __future__ import annotations

from .errors import NotSaYD, RelationViolation
from .hopf import HopfAlgebroidInstance, ModuleComodule
from .linalg import (
    Matrix,
    QuotientPresentation,
    Subspace,
    induced_on_quotient,
    quotient_by,
    vec_axpy,
)
from .spaces import InstanceSpaces


def combine_by_uvec(mats, uvec, dim, field):
    rows = [dict() for _ in range(dim)]
    for j, c in uvec.items():
        for i, row in enumerate(mats[j].rows):
            for k, v in row.items():
                s = field.add(rows[i].get(k, field.zero), field.mul(c, v))
                if field.is_zero(s):
                    rows[i].pop(k, None)
                else:
                    rows[i][k] = s
    return Matrix(field, dim, dim, rows)


class ParaCyclicBundle:
    """Faces, degeneracies, cyclic operator and derived maps, per degree."""

    def __init__(self, spaces: InstanceSpaces, n_max: int, validate: bool = True,
                 ayd_flags=None):
        self.spaces = spaces
        self.inst = spaces.inst
        self.module = spaces.module
        self.n_max = n_max
        self.flags = ayd_flags
        f = self.inst.field
        self.field = f
        self._faces: dict = {}
        self._degens: dict = {}
        self._t: dict = {}
        self._t_pows: dict = {}
        self._b: dict = {}
        self._N: dict = {}
        self._s_minus1: dict = {}
        self._B: dict = {}
        for n in range(n_max + 1):
            self.spaces.chain_tower.level(n)
        if validate:
            self.validate()

    def dim(self, n: int) -> int:
        return self.spaces.chain_tower.dim(n)

    def labels(self, n: int):
        return self.spaces.chain_tower.labels(n)

    # -- structure maps -----------------------------------------------------

    def face(self, n: int, i: int) -> Matrix:
        key = (n, i)
        if key not in self._faces:
            tower = self.spaces.chain_tower
            if not (0 <= i <= n) or n < 1:
                raise ValueError(f"face d_{i} undefined in degree {n}")
            if i == 0:
                self._faces[key] = tower.face_eps_last(n)
            else:
                self._faces[key] = tower.face_mult(n, i)
        return self._faces[key]

    def degen(self, n: int, j: int) -> Matrix:
        key = (n, j)
        if key not in self._degens:
            if not (0 <= j <= n):
                raise ValueError(f"degeneracy s_{j} undefined in degree {n}")
            self._degens[key] = self.spaces.chain_tower.insert_unit(n, j)
        return self._degens[key]

    def t(self, n: int) -> Matrix:
        if n not in self._t:
            self._t[n] = self._build_t(n)
        return self._t[n]

    def t_pow(self, n: int, k: int) -> Matrix:
        key = (n, k)
        if key not in self._t_pows:
            if k == 0:
                self._t_pows[key] = Matrix.identity(self.field, self.dim(n))
            else:
                self._t_pows[key] = self.t(n) @ self.t_pow(n, k - 1)
        return self._t_pows[key]

    def T(self, n: int) -> Matrix:
        return self.t_pow(n, n + 1)

    def b(self, n: int) -> Matrix:
        if n not in self._b:
            f = self.field
            if n == 0:
                self._b[0] = Matrix.zeros(f, 0, self.dim(0))
            else:
                out = None
                for i in range(n + 1):
                    term = self.face(n, i)
                    if i % 2:
                        term = term.neg()
                    out = term if out is None else out + term
                self._b[n] = out
        return self._b[n]

    def N(self, n: int) -> Matrix:
        if n not in self._N:
            f = self.field
            total = Matrix.identity(f, self.dim(n))
            for i in range(1, n + 1):
                term = self.t_pow(n, i)
                if (i * n) % 2:
                    term = term.neg()
                total = total + term
            self._N[n] = total
        return self._N[n]

    def s_minus1(self, n: int) -> Matrix:
        if n not in self._s_minus1:
            self._s_minus1[n] = self.t(n + 1) @ self.degen(n, n)
        return self._s_minus1[n]

    def B(self, n: int) -> Matrix:
        """The cyclic differential (id - lambda) s_{-1} N on degree n.

        lambda is the signed cyclic operator (-1)^(n+1) t on the target
        degree; with the unsigned t this reads id + (-1)^n t.  On the reduced
        complex B coincides with s_{-1} N since the correction lands in the
        degenerate subcomplex.
        """
        if n not in self._B:
            f = self.field
            ident = Matrix.identity(f, self.dim(n + 1))
            tpart = self.t(n + 1)
            if n % 2:
                tpart = tpart.neg()
            self._B[n] = (ident + tpart) @ self.s_minus1(n) @ self.N(n)
        return self._B[n]

    # -- the cyclic operator --------------------------------------------------

    def _build_t(self, n: int) -> Matrix:
        f = self.field
        h = self.inst
        m = self.module
        tower = self.spaces.chain_tower
        if n == 0:
            cols = []
            for i in range(m.dim):
                out: dict = {}
                for u, mi, c in m.coaction_reps[i]:
                    vec_axpy(f, out, c, m.action[u].apply({mi: f.one}))
                cols.append(out)
            return Matrix.from_cols(f, m.dim, cols)
        if n == 1:
            ud = h.udim
            cols = []
            for z in range(m.dim):
                for v in range(ud):
                    out = {}
                    for p, mn, c1 in h.translation_reps[v]:
                        for uc, m0, c2 in m.coaction_reps[z]:
                            mpart = m.action[p].apply({m0: f.one})
                            upart = h.total.mult[mn][uc]
                            cc = f.mul(c1, c2)
                            for mi, cm in mpart.items():
                                for uj, cu in upart.items():
                                    vec_axpy(f, out, f.mul(cc, f.mul(cm, cu)),
                                             {mi * ud + uj: f.one})
                            if not mpart or not upart:
                                pass
                    cols.append(tower.layer_proj(1).apply(out))
            amb = Matrix.from_cols(f, self.dim(1), cols)
            return amb @ tower.layer_sect(1)
        # n >= 2: t_n = Phi . (t_{n-1} (x) id) with Phi replacing the last
        # slot w by (v_+, v_- w) for the new factor v
        ud = h.udim
        umult_left = [h.total.left_mult_matrix({j: f.one}) for j in range(ud)]
        chains = []
        for v in range(ud):
            acc = None
            for p, mn, c in h.translation_reps[v]:
                apm = tower.append(n - 2, {p: f.one})  # Q_{n-2} -> Q_{n-1}
                term = tower.layer_proj(n) @ apm.kron(umult_left[mn]) \
                    @ tower.layer_sect(n - 1)
                if not f.eq(c, f.one):
                    term = term.scale(c)
                acc = term if acc is None else acc + term
            if acc is None:
                acc = Matrix.zeros(f, self.dim(n), self.dim(n - 1))
            chains.append(acc)
        qn = self.dim(n)
        qprev = self.dim(n - 1)
        rows = [dict() for _ in range(qn)]
        for v, chain in enumerate(chains):
            for i, row in enumerate(chain.rows):
                for z, c in row.items():
                    rows[i][z * ud + v] = c
        m_phi = Matrix(f, qn, qprev * ud, rows)
        return m_phi @ self.t(n - 1).kron(Matrix.identity(f, ud)) \
            @ tower.layer_sect(n)

    # -- validation -----------------------------------------------------------

    def validate(self):
        f = self.field
        for n in range(1, self.n_max + 1):
            # simplicial identities
            if n >= 2:
                for j in range(n + 1):
                    for i in range(j):
                        lhs = self.face(n - 1, i) @ self.face(n, j)
                        rhs = self.face(n - 1, j - 1) @ self.face(n, i)
                        if lhs != rhs:
                            raise RelationViolation(
                                f"d_{i} d_{j} = d_{j-1} d_{i} fails in degree {n}")
            for j in range(n):
                for i in range(n + 1):
                    lhs = self.face(n, i) @ self.degen(n - 1, j)
                    if i < j:
                        rhs = self.degen(n - 2, j - 1) @ self.face(n - 1, i) \
                            if n >= 2 else None
                    elif i in (j, j + 1):
                        rhs = Matrix.identity(f, self.dim(n - 1))
                    else:
                        rhs = self.degen(n - 2, j) @ self.face(n - 1, i - 1) \
                            if n >= 2 else None
                    if rhs is not None and lhs != rhs:
                        raise RelationViolation(
                            f"d_{i} s_{j} relation fails in degree {n-1}")
            # cyclic relations
            lhs = self.face(n, 0) @ self.t(n)
            if lhs != self.face(n, n):
                raise RelationViolation(f"d_0 t = d_n fails in degree {n}")
            for i in range(1, n + 1):
                lhs = self.face(n, i) @ self.t(n)
                rhs = self.t(n - 1) @ self.face(n, i - 1)
                if lhs != rhs:
                    raise RelationViolation(
                        f"d_{i} t = t d_{i-1} fails in degree {n}")
        for n in range(0, self.n_max):
            lhs = self.degen(n, 0) @ self.t(n)
            rhs = self.t(n + 1) @ self.t(n + 1) @ self.degen(n, n)
            if lhs != rhs:
                raise RelationViolation(f"s_0 t = t^2 s_n fails in degree {n}")
            for i in range(1, n + 1):
                lhs = self.degen(n, i) @ self.t(n)
                rhs = self.t(n + 1) @ self.degen(n, i - 1)
                if lhs != rhs:
                    raise RelationViolation(
                        f"s_{i} t = t s_{i-1} fails in degree {n}")
        # T central, b squares to zero
        for n in range(1, self.n_max + 1):
            for i in range(n + 1):
                if self.face(n, i) @ self.T(n) != self.T(n - 1) @ self.face(n, i):
                    raise RelationViolation(f"T does not commute with d_{i} in degree {n}")
            if n >= 2 and not (self.b(n - 1) @ self.b(n)).is_zero():
                raise RelationViolation(f"b^2 != 0 in degree {n}")
        for n in range(0, self.n_max):
            for j in range(n + 1):
                if self.degen(n, j) @ self.T(n) != self.T(n + 1) @ self.degen(n, j):
                    raise RelationViolation(f"T does not commute with s_{j} in degree {n}")


# ---------------------------------------------------------------------------
# quotient complexes (cyclic coinvariants, reduced, reduced cyclic)


class QuotientComplex:
    """A degreewise quotient of the chain bundle with induced operators."""

    def __init__(self, bundle: ParaCyclicBundle, kill_cyclic: bool,
                 kill_degenerate: bool, n_max: int | None = None):
        self.bundle = bundle
        self.kill_cyclic = kill_cyclic
        self.kill_degenerate = kill_degenerate
        self.n_max = bundle.n_max if n_max is None else n_max
        self.field = bundle.field
        self._pres: dict[int, QuotientPresentation] = {}
        self._induced: dict = {}

    def presentation(self, n: int) -> QuotientPresentation:
        if n not in self._pres:
            f = self.field
            vecs = []
            if self.kill_cyclic:
                ident = Matrix.identity(f, self.bundle.dim(n))
                diff = ident - self.bundle.T(n)
                vecs.extend(diff.columns())
            if self.kill_degenerate and n >= 1:
                for j in range(n):
                    vecs.extend(self.bundle.degen(n - 1, j).columns())
            rel = Subspace.from_vectors(f, self.bundle.dim(n), vecs)
            self._pres[n] = quotient_by(rel)
        return self._pres[n]

    def dim(self, n: int) -> int:
        return self.presentation(n).quotient_dim

    def induce(self, op: Matrix, n_src: int, n_dst: int) -> Matrix:
        return induced_on_quotient(op, self.presentation(n_src),
                                   self.presentation(n_dst))

    def _memo(self, key, builder):
        if key not in self._induced:
            self._induced[key] = builder()
        return self._induced[key]

    def face(self, n, i):
        return self._memo(("d", n, i), lambda: self.induce(self.bundle.face(n, i), n, n - 1))

    def degen(self, n, j):
        return self._memo(("s", n, j), lambda: self.induce(self.bundle.degen(n, j), n, n + 1))

    def t(self, n):
        return self._memo(("t", n), lambda: self.induce(self.bundle.t(n), n, n))

    def t_pow(self, n, k):
        if k == 0:
            return Matrix.identity(self.field, self.dim(n))
        return self._memo(("tp", n, k), lambda: self.t(n) @ self.t_pow(n, k - 1))

    def b(self, n):
        if n == 0:
            return Matrix.zeros(self.field, 0, self.dim(0))
        return self._memo(("b", n), lambda: self.induce(self.bundle.b(n), n, n - 1))

    def s_minus1(self, n):
        return self._memo(("sm1", n), lambda: self.induce(self.bundle.s_minus1(n), n, n + 1))

    def N(self, n):
        return self._memo(("N", n), lambda: self.induce(self.bundle.N(n), n, n))

    def B(self, n):
        """The induced cyclic differential.

        On reduced quotients the composite s_{-1} N is induced directly (its
        factors do not descend separately, only their product does); on the
        plain cyclic quotient the full (id - lambda) s_{-1} N is induced.
        """
        def build():
            if self.kill_degenerate:
                comp = self.bundle.s_minus1(n) @ self.bundle.N(n)
                return self.induce(comp, n, n + 1)
            return self.induce(self.bundle.B(n), n, n + 1)
        return self._memo(("B", n), build)


def cyclic_coinvariants(bundle: ParaCyclicBundle) -> QuotientComplex:
    """The universal cyclic quotient: induced T is the identity."""
    qc = QuotientComplex(bundle, kill_cyclic=True, kill_degenerate=False)
    for n in range(bundle.n_max + 1):
        ident = Matrix.identity(bundle.field, qc.dim(n))
        if qc.induce(bundle.T(n), n, n) != ident:
            raise RelationViolation(f"induced T is not the identity in degree {n}")
    return qc


def reduced_complex(bundle: ParaCyclicBundle) -> QuotientComplex:
    return QuotientComplex(bundle, kill_cyclic=False, kill_degenerate=True)


def reduced_cyclic_complex(bundle: ParaCyclicBundle) -> QuotientComplex:
    return QuotientComplex(bundle, kill_cyclic=True, kill_degenerate=True)


def quasi_cyclic_split(bundle: ParaCyclicBundle, n: int) -> bool:
    """True iff C_n = ker(id - T) (+) im(id - T)."""
    from .linalg import rref_kernel_image, split_check

    f = bundle.field
    ident = Matrix.identity(f, bundle.dim(n))
    diff = ident - bundle.T(n)
    _, ker, im = rref_kernel_image(diff)
    return split_check(ker, im)


# ---------------------------------------------------------------------------
# SaYD closed-form oracles


def _require_sayd(bundle: ParaCyclicBundle):
    flags = bundle.flags
    if flags is None or not (flags.is_ayd and flags.is_stable):
        raise NotSaYD("coefficients are not a stable anti Yetter-Drinfeld module")


def powers_of_t_oracle(bundle: ParaCyclicBundle, n: int, i: int) -> Matrix:
    """Closed form of t^i on C_n for stable anti Yetter-Drinfeld coefficients."""
    _require_sayd(bundle)
    if not (1 <= i <= n):
        raise ValueError("power index out of range")
    h, m = bundle.inst, bundle.module
    f = bundle.field
    tower = bundle.spaces.chain_tower
    ud = h.udim
    full_cols = []
    for z in range(m.dim):
        for tail in range(ud ** n):
            us = _digits(tail, ud, n)  # us[q] is the basis index of u^{q+1}
            out: dict = {}

            def rec(q, plus_legs, minus_legs, coeff):
                if q == n:
                    _assemble(plus_legs, minus_legs, coeff, out)
                    return
                for p, mn, c in h.translation_reps[us[q]]:
                    if q <= i - 2:
                        for p1, p2, c2 in h.coproduct_reps[p]:
                            rec(q + 1, plus_legs + [(p1, p2)], minus_legs + [mn],
                                f.mul(coeff, f.mul(c, c2)))
                    else:
                        rec(q + 1, plus_legs + [(None, p)], minus_legs + [mn],
                            f.mul(coeff, c))

            def _assemble(plus_legs, minus_legs, coeff, out):
                for uc, m0, c0 in m.coaction_reps[z]:
                    cx = f.mul(coeff, c0)
                    # m-part: m_(0) u^1_{+(2)} ... u^{i-1}_{+(2)} u^i_+
                    prod = None
                    for q in range(i):
                        leg = plus_legs[q][1]
                        prod = {leg: f.one} if prod is None else \
                            h.total.multiply(prod, {leg: f.one})
                    if prod is None:
                        prod = h.total.unit_vector()
                    msum: dict = {}
                    for uu, cu in prod.items():
                        vec_axpy(f, msum, cu, m.action[uu].apply({m0: f.one}))
                    # minus product: u^n_- ... u^1_- m_(-1)
                    mm = {minus_legs[n - 1]: f.one}
                    for q in range(n - 2, -1, -1):
                        mm = h.total.multiply(mm, {minus_legs[q]: f.one})
                    mm = h.total.multiply(mm, {uc: f.one})
                    # slots: u^{i+1}_+ ... u^n_+, minus product, u^1_{+(1)} ... u^{i-1}_{+(1)}
                    slot_vecs = [{plus_legs[q][1]: f.one} for q in range(i, n)]
                    slot_vecs.append(mm)
                    slot_vecs.extend({plus_legs[q][0]: f.one} for q in range(i - 1))
                    _emit_slots(msum, slot_vecs, cx, out)

            def _emit_slots(msum, slot_vecs, coeff, out):
                combos = [([], coeff)]
                for sv in slot_vecs:
                    new = []
                    for picked, cf in combos:
                        for j, cj in sv.items():
                            new.append((picked + [j], f.mul(cf, cj)))
                    combos = new
                for picked, cf in combos:
                    idx = 0
                    for s in picked:
                        idx = idx * ud + s
                    for mi, cm in msum.items():
                        vec_axpy(f, out, f.mul(cf, cm),
                                 {mi * (ud ** n) + idx: f.one})

            rec(0, [], [], f.one)
            full_cols.append(out)
    full = Matrix.from_cols(f, m.dim * ud ** n, full_cols)
    return tower.full_proj(n) @ full @ tower.full_sect(n)


def connes_B_oracle(bundle: ParaCyclicBundle, n: int) -> Matrix:
    """Closed form of s_{-1} N on the reduced complex for SaYD coefficients.

    Returns the matrix on the unreduced chain spaces; the contract with the
    generic composite holds after passing to the reduced quotient.
    """
    _require_sayd(bundle)
    h, m = bundle.inst, bundle.module
    f = bundle.field
    tower = bundle.spaces.chain_tower
    ud = h.udim
    full_cols = []
    for z in range(m.dim):
        for tail in range(ud ** n):
            us = _digits(tail, ud, n)
            out: dict = {}
            for i in range(n + 1):
                sign = f.one if (i * n) % 2 == 0 else f.neg(f.one)

                def rec(q, plus_legs, minus_legs, coeff):
                    if q == n:
                        assemble(plus_legs, minus_legs, coeff)
                        return
                    for p, mn, c in h.translation_reps[us[q]]:
                        if q <= i - 1:
                            for p1, p2, c2 in h.coproduct_reps[p]:
                                rec(q + 1, plus_legs + [(p1, p2)],
                                    minus_legs + [mn], f.mul(coeff, f.mul(c, c2)))
                        else:
                            rec(q + 1, plus_legs + [(None, p)], minus_legs + [mn],
                                f.mul(coeff, c))

                def assemble(plus_legs, minus_legs, coeff):
                    for uc, m0, c0 in m.coaction_reps[z]:
                        cx = f.mul(coeff, c0)
                        prod = h.total.unit_vector()
                        for q in range(i):
                            prod = h.total.multiply(prod, {plus_legs[q][1]: f.one})
                        msum: dict = {}
                        for uu, cu in prod.items():
                            vec_axpy(f, msum, cu, m.action[uu].apply({m0: f.one}))
                        mm = None
                        for q in range(n - 1, -1, -1):
                            leg = {minus_legs[q]: f.one}
                            mm = leg if mm is None else h.total.multiply(mm, leg)
                        mm = h.total.multiply(mm, {uc: f.one}) if mm is not None \
                            else {uc: f.one}
                        slot_vecs = [{plus_legs[q][1]: f.one} for q in range(i, n)]
                        slot_vecs.append(mm)
                        slot_vecs.extend({plus_legs[q][0]: f.one} for q in range(i))
                        combos = [([], f.mul(cx, sign))]
                        for sv in slot_vecs:
                            new = []
                            for picked, cf in combos:
                                for j, cj in sv.items():
                                    new.append((picked + [j], f.mul(cf, cj)))
                            combos = new
                        for picked, cf in combos:
                            idx = 0
                            for s in picked:
                                idx = idx * ud + s
                            for mi, cm in msum.items():
                                vec_axpy(f, out, f.mul(cf, cm),
                                         {mi * (ud ** (n + 1)) + idx: f.one})

                rec(0, [], [], f.one)
            full_cols.append(out)
    full = Matrix.from_cols(f, m.dim * ud ** (n + 1), full_cols)
    return tower.full_proj(n + 1) @ full @ tower.full_sect(n)


# ---------------------------------------------------------------------------
# bar bundle


class BarBundle:
    """The bar resolution with its coalgebra structure and contracting homotopy."""

    def __init__(self, spaces: InstanceSpaces, n_max: int, validate: bool = True):
        self.spaces = spaces
        self.inst = spaces.inst
        self.n_max = n_max
        self.field = spaces.inst.field
        self._bprime: dict = {}
        self._pairs: dict = {}
        self._pair_proj_full: dict = {}
        self._pair_sect_full: dict = {}
        for n in range(n_max + 1):
            spaces.bar_tower.level(n)
        if validate:
            self.validate()

    def dim(self, n: int) -> int:
        return self.spaces.bar_tower.dim(n)

    def bprime(self, n: int) -> Matrix:
        if n not in self._bprime:
            f = self.field
            tower = self.spaces.bar_tower
            out = None
            for i in range(n):
                term = tower.face_mult(n, n - i)
                if i % 2:
                    term = term.neg()
                out = term if out is None else out + term
            last = tower.face_eps_last(n)
            if n % 2:
                last = last.neg()
            out = last if out is None else out + last
            self._bprime[n] = out
        return self._bprime[n]

    # -- tensor-square spaces ---------------------------------------------------

    def pair_space(self, i: int, j: int) -> QuotientPresentation:
        """P_i (x)_A P_j presented over quotient (x) quotient coordinates."""
        key = (i, j)
        if key not in self._pairs:
            f = self.field
            h = self.inst
            tower = self.spaces.bar_tower
            di, dj = tower.dim(i), tower.dim(j)
            gens = []
            for ai in range(h.base.dim):
                av = {ai: f.one}
                lt = tower.l_mat(i, h.t_vec(av))
                ls = tower.l_mat(j, h.s_vec(av))
                for z in range(di):
                    ltz = lt.col(z)
                    for w in range(dj):
                        vec: dict = {}
                        for x, c in ltz.items():
                            vec[x * dj + w] = c
                        for y, c in ls.col(w).items():
                            s = f.sub(vec.get(z * dj + y, f.zero), c)
                            if f.is_zero(s):
                                vec.pop(z * dj + y, None)
                            else:
                                vec[z * dj + y] = s
                        if vec:
                            gens.append(vec)
            from .linalg import quotient_from_generators

            self._pairs[key] = quotient_from_generators(f, di * dj, gens)
        return self._pairs[key]

    def _pair_full_maps(self, i: int, j: int):
        """Projection/section between the pair quotient and the full ambient."""
        key = (i, j)
        if key not in self._pair_proj_full:
            tower = self.spaces.bar_tower
            pres = self.pair_space(i, j)
            proj = pres.projection @ tower.full_proj(i).kron(tower.full_proj(j))
            sect = tower.full_sect(i).kron(tower.full_sect(j)) @ pres.section
            self._pair_proj_full[key] = proj
            self._pair_sect_full[key] = sect
        return self._pair_proj_full[key], self._pair_sect_full[key]

    # -- coalgebra structure ------------------------------------------------------

    def delta_component(self, n: int, i: int) -> Matrix:
        """P_n -> P_i (x)_A P_{n-i} on quotient coordinates."""
        f = self.field
        h = self.inst
        tower = self.spaces.bar_tower
        ud = h.udim
        proj, _ = self._pair_full_maps(i, n - i)
        full_sect = tower.full_sect(n)
        amb_right = ud ** (n - i + 1)
        cols = []
        for z in range(tower.dim(n)):
            out: dict = {}
            for idx, c in full_sect.col(z).items():
                us = _digits(idx, ud, n + 1)
                # split Delta over factors 0..i, multiply the second legs
                def rec(q, legs1, prod, coeff):
                    if q == i + 1:
                        left = 0
                        for s in legs1:
                            left = left * ud + s
                        for pu, cu in prod.items():
                            right = pu
                            for s in us[i + 1:]:
                                right = right * ud + s
                            vec_axpy(f, out, f.mul(coeff, cu),
                                     {left * amb_right + right: f.one})
                        return
                    for a1, a2, c2 in h.coproduct_reps[us[q]]:
                        rec(q + 1, legs1 + [a1],
                            h.total.multiply(prod, {a2: f.one}), f.mul(coeff, c2))

                rec(0, [], h.total.unit_vector(), c)
            cols.append(proj.apply(out))
        return Matrix.from_cols(f, self.pair_space(i, n - i).quotient_dim, cols)

    def id_x_eps(self, n: int) -> Matrix:
        """(id (x) eps^P): the P_n (x) P_0 component to P_n, others zero."""
        f = self.field
        h = self.inst
        tower = self.spaces.bar_tower
        pres = self.pair_space(n, 0)
        dn = tower.dim(n)
        cols = []
        for col_idx in range(pres.quotient_dim):
            amb = pres.lift({col_idx: f.one})
            out: dict = {}
            for idx, c in amb.items():
                z, v = divmod(idx, tower.dim(0))
                tv = h.t_vec(h.counit.apply({v: f.one}))
                vec_axpy(f, out, c, tower.l_mat(n, tv).apply({z: f.one}))
            cols.append(out)
        return Matrix.from_cols(f, dn, cols)

    def homotopy_component(self, i: int, j: int, r: int) -> Matrix:
        """The P_i (x) P_j -> P_r (x) P_{n+1-r} piece of the contracting homotopy."""
        f = self.field
        h = self.inst
        tower = self.spaces.bar_tower
        ud = h.udim
        n = i + j
        _, sect = self._pair_full_maps(i, j)
        proj_t, _ = self._pair_full_maps(r, n + 1 - r)
        amb_right = ud ** (n + 2 - r)
        sign = f.one if i % 2 == 0 else f.neg(f.one)
        cols = []
        for z in range(self.pair_space(i, j).quotient_dim):
            out: dict = {}
            for idx, c in sect.col(z).items():
                left_idx, right_idx = divmod(idx, ud ** (j + 1))
                us = _digits(left_idx, ud, i + 1)
                vs = _digits(right_idx, ud, j + 1)

                def rec(q, legs1, plus_tail, minus_prod, coeff):
                    # translate u^q; for q <= r also split the plus leg
                    if q == i + 1:
                        emit(legs1, plus_tail, minus_prod, coeff)
                        return
                    for p, mn, c2 in h.translation_reps[us[q]]:
                        cc = f.mul(coeff, c2)
                        new_minus = h.total.multiply({mn: f.one}, minus_prod)
                        if q <= r:
                            for p1, p2, c3 in h.coproduct_reps[p]:
                                rec(q + 1, legs1 + [(p1, p2)], plus_tail,
                                    new_minus, f.mul(cc, c3))
                        else:
                            rec(q + 1, legs1, plus_tail + [p], new_minus, cc)

                def emit(legs1, plus_tail, minus_prod, coeff):
                    # left leg: u^0_{+(1)} .. u^r_{+(1)}
                    left = 0
                    for (p1, _p2) in legs1:
                        left = left * ud + p1
                    # right leg: prod of second legs, then plus tail, then
                    # (minus product) v^0, then v^1..v^j
                    prod = h.total.unit_vector()
                    for (_p1, p2) in legs1:
                        prod = h.total.multiply(prod, {p2: f.one})
                    head = h.total.multiply(minus_prod, {vs[0]: f.one})
                    for pu, cu in prod.items():
                        for hu, chl in head.items():
                            right = pu
                            for s in plus_tail:
                                right = right * ud + s
                            right = right * ud + hu
                            for s in vs[1:]:
                                right = right * ud + s
                            vec_axpy(f, out, f.mul(f.mul(coeff, cu),
                                                   f.mul(chl, sign)),
                                     {left * amb_right + right: f.one})

                rec(0, [], [], h.total.unit_vector(), c)
            cols.append(proj_t.apply(out))
        return Matrix.from_cols(f, self.pair_space(r, n + 1 - r).quotient_dim, cols)

    # -- validation -----------------------------------------------------------

    def validate(self):
        for n in range(2, self.n_max + 1):
            if not (self.bprime(n - 1) @ self.bprime(n)).is_zero():
                raise RelationViolation(f"bar boundary does not square to zero at {n}")


def _digits(idx: int, base: int, length: int) -> list:
    out = []
    for k in range(length - 1, -1, -1):
        out.append((idx // (base ** k)) % base)
    return out


# ---------------------------------------------------------------------------
# the cosimplicial differential and reduced cochains


def cosimplicial_delta(spaces: InstanceSpaces, p: int) -> Matrix:
    """The coboundary on A-linear cochains, as a matrix between coordinates."""
    h = spaces.inst
    f = h.field
    src = spaces.cochain_space(p)
    dst = spaces.cochain_space(p + 1)
    ud = h.udim
    d = h.base.dim
    act_on_a = h.u_basis_counit_action()
    cols = []
    for jb in range(src.dim):
        full = src.full_array({jb: f.one})  # d x ud^p
        rows = [dict() for _ in range(d)]
        for tail in range(ud ** (p + 1)):
            us = _digits(tail, ud, p + 1)
            val: dict = {}
            if p == 0:
                # delta a (u) = eps(u s(a)) - eps(t(eps(u)) s(a))
                a_vec = full.col(0)
                u = us[0]
                term1 = h.counit.apply(
                    h.total.multiply({u: f.one}, h.s_vec(a_vec)))
                te = h.t_vec(h.counit.apply({u: f.one}))
                term2 = h.counit.apply(h.total.multiply(te, h.s_vec(a_vec)))
                val = dict(term1)
                for k, c in term2.items():
                    s = f.sub(val.get(k, f.zero), c)
                    if f.is_zero(s):
                        val.pop(k, None)
                    else:
                        val[k] = s
            else:
                # u^1 . phi(u^2..u^{p+1})
                tail_idx = 0
                for s_ in us[1:]:
                    tail_idx = tail_idx * ud + s_
                phi_val = full.col(tail_idx)
                if phi_val:
                    vec_axpy(f, val, f.one, act_on_a[us[0]].apply(phi_val))
                # inner faces
                for i in range(1, p + 1):
                    prod = h.total.mult[us[i - 1]][us[i]]
                    sign = f.neg(f.one) if i % 2 else f.one
                    for w, cw in prod.items():
                        merged = us[: i - 1] + [w] + us[i + 1:]
                        idx2 = 0
                        for s_ in merged:
                            idx2 = idx2 * ud + s_
                        pv = full.col(idx2)
                        if pv:
                            vec_axpy(f, val, f.mul(sign, cw), pv)
                # last: (-1)^{p+1} phi(u^1,...,u^p t(eps(u^{p+1})))
                sign = f.neg(f.one) if (p + 1) % 2 else f.one
                te = h.t_vec(h.counit.apply({us[p]: f.one}))
                moved = h.total.multiply({us[p - 1]: f.one}, te)
                for w, cw in moved.items():
                    merged = us[: p - 1] + [w]
                    idx2 = 0
                    for s_ in merged:
                        idx2 = idx2 * ud + s_
                    pv = full.col(idx2)
                    if pv:
                        vec_axpy(f, val, f.mul(sign, cw), pv)
            for ai, c in val.items():
                rows[ai][tail] = c
        full_mat = Matrix(f, d, ud ** (p + 1), rows)
        from .spaces import _cochain_coords_from_full

        cols.append(_cochain_coords_from_full(spaces, p + 1, full_mat))
    return Matrix.from_cols(f, dst.dim, cols)


def reduced_cochain_subspace(spaces: InstanceSpaces, p: int) -> Subspace:
    """Cochains vanishing whenever some argument is the unit of U."""
    h = spaces.inst
    f = h.field
    src = spaces.cochain_space(p)
    if p == 0:
        return Subspace.full(f, src.dim)
    ud = h.udim
    d = h.base.dim
    one_u = h.total.unit_vector()
    rows = []
    for r in range(p):
        for tail in range(ud ** (p - 1)):
            us = _digits(tail, ud, p - 1)
            inserted: dict = {}
            for u0, c0 in one_u.items():
                merged = us[:r] + [u0] + us[r:]
                idx = 0
                for s_ in merged:
                    idx = idx * ud + s_
                inserted[idx] = c0
            for ai in range(d):
                row: dict = {}
                for jb in range(src.dim):
                    val = f.zero
                    arr = src.full_arrays[jb]
                    for idx, c in inserted.items():
                        val = f.add(val, f.mul(c, arr.entry(ai, idx)))
                    if not f.is_zero(val):
                        row[jb] = val
                if row:
                    rows.append(row)
    mat = Matrix(f, len(rows), src.dim, rows)
    from .linalg import rref_kernel_image

    _, ker, _ = rref_kernel_image(mat)
    return ker
