"""The operator calculus: cup, insertion products, bracket, cap, Lie, S.

Cochains are coordinate vectors in the canonical basis of the A-linear
functional space of their degree.  Chain-level operators are matrices on the
quotient chain spaces, assembled sign-first through the parity table below
so every sign lives in one auditable place.

The insertion of a p-cochain into the last p tensor slots (the operator
written D' below) is built by a recursion that peels one layer of the chain
tower at a time, currying the last argument of the cochain through the
coproduct; this avoids ever materialising a full tensor ambient.
"""
from __future__ import annotations

from .errors import DegreeError, NotSaYD, NotSemisimple
from .complexes import ParaCyclicBundle, QuotientComplex, _digits
from .linalg import Matrix, Subspace, rref_kernel_image, vec_axpy
from .spaces import InstanceSpaces, _cochain_coords_from_full


# ---------------------------------------------------------------------------
# parity table: all operator sums take their signs from here


def theta_parity(n: int, p: int, i: int) -> int:
    """|p| (n - |i|) mod 2, with |k| = k - 1."""
    return ((p - 1) * (n - (i - 1))) % 2

def xi_parity(n: int, p: int, i: int) -> int:
    """n |i| + |p| mod 2."""
    return (n * (i - 1) + (p - 1)) % 2

def eta_parity(n: int, p: int, j: int, i: int) -> int:
    """n j + |p| i mod 2."""
    return (n * j + (p - 1) * i) % 2

def sign_of(field, parity: int):
    return field.one if parity % 2 == 0 else field.neg(field.one)


def _ckey(field, coords: dict):
    return tuple(sorted((j, field.to_str(c)) for j, c in coords.items()))


class CalculusEngine:
    """All calculus operators for one instance, with caching."""

    def __init__(self, bundle: ParaCyclicBundle):
        self.bundle = bundle
        self.spaces = bundle.spaces
        self.inst = bundle.inst
        self.module = bundle.module
        self.field = bundle.field
        f = self.field
        h = self.inst
        self._umult_right = [h.total.right_mult_matrix({j: f.one})
                             for j in range(h.udim)]
        self._w_memo: dict = {}
        self._v_memo: dict = {}
        self._bullet_memo: dict = {}
        self._delta_memo: dict = {}
        self._cyclic = None
        self._reduced = None
        self._reduced_cyclic = None
        self._cm_memo: dict = {}
        self._reduced_cochains: dict = {}

    # -- quotient complexes -----------------------------------------------

    @property
    def cyclic(self) -> QuotientComplex:
        if self._cyclic is None:
            from .complexes import cyclic_coinvariants

            self._cyclic = cyclic_coinvariants(self.bundle)
        return self._cyclic

    @property
    def reduced(self) -> QuotientComplex:
        if self._reduced is None:
            from .complexes import reduced_complex

            self._reduced = reduced_complex(self.bundle)
        return self._reduced

    @property
    def reduced_cyclic(self) -> QuotientComplex:
        if self._reduced_cyclic is None:
            from .complexes import reduced_cyclic_complex

            self._reduced_cyclic = reduced_cyclic_complex(self.bundle)
        return self._reduced_cyclic

    # -- cochain plumbing ---------------------------------------------------

    def cochain_space(self, p: int):
        return self.spaces.cochain_space(p)

    def cochain_basis(self, p: int):
        f = self.field
        return [{j: f.one} for j in range(self.cochain_space(p).dim)]

    def delta(self, p: int) -> Matrix:
        if p not in self._delta_memo:
            from .complexes import cosimplicial_delta

            self._delta_memo[p] = cosimplicial_delta(self.spaces, p)
        return self._delta_memo[p]

    def reduced_cochain_subspace(self, p: int) -> Subspace:
        if p not in self._reduced_cochains:
            from .complexes import reduced_cochain_subspace

            self._reduced_cochains[p] = reduced_cochain_subspace(self.spaces, p)
        return self._reduced_cochains[p]

    def mu(self) -> dict:
        """The distinguished two-cochain eps(uv)."""
        f = self.field
        h = self.inst
        ud = h.udim
        rows = [dict() for _ in range(h.base.dim)]
        for u in range(ud):
            for v in range(ud):
                val = h.counit.apply(h.total.mult[u][v])
                for ai, c in val.items():
                    rows[ai][u * ud + v] = c
        full = Matrix(f, h.base.dim, ud * ud, rows)
        return _cochain_coords_from_full(self.spaces, 2, full)

    def unit_cochain(self) -> dict:
        return dict(self.inst.base.unit_vector())

    # -- D operators ----------------------------------------------------------

    def d_phi_full(self, p: int, coords: dict) -> Matrix:
        """The full-ambient matrix of (u^1..u^p) -> phi(legs1) |> prod(legs2)."""
        f = self.field
        h = self.inst
        ud = h.udim
        if p == 0:
            return Matrix.from_cols(f, ud, [h.s_vec(coords)])
        arr = self.cochain_space(p).full_array(coords)
        cols = []
        for tail in range(ud ** p):
            us = _digits(tail, ud, p)
            out: dict = {}

            def rec(q, legs1, prod, coeff):
                if q == p:
                    idx = 0
                    for s in legs1:
                        idx = idx * ud + s
                    val = arr.col(idx)
                    if val:
                        sval = h.s_vec(val)
                        res = h.total.multiply(sval, prod)
                        vec_axpy(f, out, coeff, res)
                    return
                for a1, a2, c2 in h.coproduct_reps[us[q]]:
                    rec(q + 1, legs1 + [a1],
                        h.total.multiply(prod, {a2: f.one}), f.mul(coeff, c2))

            rec(0, [], h.total.unit_vector(), f.one)
            cols.append(out)
        return Matrix.from_cols(f, ud, cols)

    def d_phi(self, p: int, coords: dict) -> Matrix:
        """D on the quotient domain of degree-p cochains (descends exactly)."""
        full = self.d_phi_full(p, coords)
        tower = self.spaces.cochain_tower
        if p == 0:
            return full
        for rel in tower.full_presentation(p).relations.basis_vectors():
            if full.apply(rel):
                raise ValueError("insertion operator does not kill the relations")
        return full @ tower.full_sect(p)

    # -- cup, insertion products, bracket ---------------------------------------

    def cup(self, p: int, phi: dict, q: int, psi: dict) -> dict:
        f = self.field
        h = self.inst
        ud = h.udim
        d = h.base.dim
        if p == 0:
            # (a cup psi)(x) = a psi(x)
            arr = self.cochain_space(q).full_array(psi)
            lm = h.base.left_mult_matrix(phi)
            return _cochain_coords_from_full(self.spaces, q, lm @ arr)
        phi_arr = self.cochain_space(p).full_array(phi)
        psi_arr = self.cochain_space(q).full_array(psi)
        rows = [dict() for _ in range(d)]
        for tail in range(ud ** (p + q)):
            us = _digits(tail, ud, p + q)
            tail_idx = 0
            for s in us[p:]:
                tail_idx = tail_idx * ud + s
            val = psi_arr.col(tail_idx)
            if not val and q > 0:
                continue
            tvec = h.t_vec(val)
            moved = h.total.multiply({us[p - 1]: f.one}, tvec)
            out: dict = {}
            for w, cw in moved.items():
                idx = 0
                for s in us[: p - 1]:
                    idx = idx * ud + s
                idx = idx * ud + w
                vec_axpy(f, out, cw, phi_arr.col(idx))
            for ai, c in out.items():
                rows[ai][tail] = c
        full = Matrix(f, d, ud ** (p + q), rows)
        return _cochain_coords_from_full(self.spaces, p + q, full)

    def circ(self, p: int, phi: dict, q: int, psi: dict, i: int) -> dict:
        """The insertion phi o_i psi, for 1 <= i <= p (zero when p = 0)."""
        f = self.field
        h = self.inst
        ud = h.udim
        if p == 0:
            return {}
        if not (1 <= i <= p):
            raise IndexError(f"insertion slot {i} out of range 1..{p}")
        dpsi = self.d_phi_full(q, psi)  # ud x ud^q (or ud x 1 for q = 0)
        left = Matrix.identity(f, ud ** (i - 1))
        right = Matrix.identity(f, ud ** (p - i))
        mid = left.kron(dpsi).kron(right)
        phi_arr = self.cochain_space(p).full_array(phi)
        full = phi_arr @ mid
        return _cochain_coords_from_full(self.spaces, p + q - 1, full)

    def bar_circ(self, p: int, phi: dict, q: int, psi: dict) -> dict:
        f = self.field
        out: dict = {}
        for i in range(1, p + 1):
            term = self.circ(p, phi, q, psi, i)
            par = ((p - 1) * (q - 1) + (q - 1) * (i - 1)) % 2
            vec_axpy(f, out, sign_of(f, par), term)
        return out

    def bracket(self, p: int, phi: dict, q: int, psi: dict) -> dict:
        f = self.field
        out = self.bar_circ(p, phi, q, psi)
        other = self.bar_circ(q, psi, p, phi)
        par = ((p - 1) * (q - 1)) % 2
        vec_axpy(f, out, f.neg(sign_of(f, par)), other)
        return out

    # -- chain-level insertion operators ---------------------------------------

    def _functional_key(self, arr: Matrix):
        f = self.field
        return tuple(sorted((i, j, f.to_str(c))
                            for i, row in enumerate(arr.rows)
                            for j, c in row.items()))

    def _w_matrix(self, r: int, arr: Matrix, m: int) -> Matrix:
        """Insert an r-slot functional's D-operator at the last r slots.

        Maps chain level m to coordinates on Q_{m-r} (x) U, peeling one layer
        at a time and currying the last slot through the coproduct.
        """
        f = self.field
        h = self.inst
        ud = h.udim
        tower = self.spaces.chain_tower
        key = (r, m, self._functional_key(arr))
        if key in self._w_memo:
            return self._w_memo[key]
        if r == 1:
            # z (x) v -> z (x) D(v), D(v) = s(psi(v_(1))) v_(2)
            cols = []
            for v in range(ud):
                out: dict = {}
                for a1, a2, c in h.coproduct_reps[v]:
                    val = arr.col(a1)
                    if not val:
                        continue
                    sval = h.s_vec(val)
                    vec_axpy(f, out, c, h.total.multiply(sval, {a2: f.one}))
                cols.append(out)
            dmat = Matrix.from_cols(f, ud, cols)
            qprev = tower.dim(m - 1)
            res = Matrix.identity(f, qprev).kron(dmat) @ tower.layer_sect(m)
        else:
            qtarget = tower.dim(m - r) * ud
            qprev = tower.dim(m - 1)
            blocks: dict[int, Matrix] = {}
            for v in range(ud):
                acc = None
                for a1, a2, c in h.coproduct_reps[v]:
                    curried = self._curry_last(arr, a1)
                    inner = self._w_matrix(r - 1, curried, m - 1)
                    term = Matrix.identity(f, tower.dim(m - r)).kron(
                        self._umult_right[a2]) @ inner
                    if not f.eq(c, f.one):
                        term = term.scale(c)
                    acc = term if acc is None else acc + term
                blocks[v] = acc if acc is not None else Matrix.zeros(f, qtarget, qprev)
            rows = [dict() for _ in range(qtarget)]
            for v, mat in blocks.items():
                for i, row in enumerate(mat.rows):
                    for z, c in row.items():
                        rows[i][z * ud + v] = c
            res = Matrix(f, qtarget, qprev * ud, rows) @ tower.layer_sect(m)
        self._w_memo[key] = res
        return res

    def _curry_last(self, arr: Matrix, v: int) -> Matrix:
        """Restrict the last argument of a functional array to a basis element."""
        f = self.field
        ud = self.inst.udim
        ncols = arr.ncols // ud
        rows = [dict() for _ in range(arr.nrows)]
        for i, row in enumerate(arr.rows):
            for j, c in row.items():
                if j % ud == v:
                    rows[i][j // ud] = c
        return Matrix(f, arr.nrows, ncols, rows)

    def bullet(self, p: int, phi: dict, n: int, i: int) -> Matrix:
        """phi bullet_i : C_n -> C_{n-p+1}, inserting D_phi at slot i."""
        f = self.field
        h = self.inst
        tower = self.spaces.chain_tower
        top = n + 1 if p == 0 else n - p + 1
        if not (1 <= i <= top):
            raise IndexError(f"bullet slot {i} out of range 1..{top} (p={p}, n={n})")
        key = (p, _ckey(f, phi), n, i)
        if key in self._bullet_memo:
            return self._bullet_memo[key]
        if p == 0:
            if i == top:
                res = tower.append(n, h.s_vec(phi))
            else:
                inner = self.bullet(p, phi, n - 1, i)
                op = inner.kron(Matrix.identity(f, h.udim))
                res = tower.layer_proj(n + 1) @ op @ tower.layer_sect(n)
        else:
            if i == top:
                arr = self.cochain_space(p).full_array(phi)
                w = self._w_matrix(p, arr, n)
                res = tower.layer_proj(n - p + 1) @ w
            else:
                inner = self.bullet(p, phi, n - 1, i)
                op = inner.kron(Matrix.identity(f, h.udim))
                res = tower.layer_proj(n - p + 1) @ op @ tower.layer_sect(n)
        self._bullet_memo[key] = res
        return res

    def d_prime(self, p: int, phi: dict, n: int) -> Matrix:
        top = n + 1 if p == 0 else n - p + 1
        return self.bullet(p, phi, n, top)

    # -- cap product ----------------------------------------------------------

    def cap(self, p: int, phi: dict, n: int) -> Matrix:
        """iota_phi : C_n -> C_{n-p}."""
        f = self.field
        h = self.inst
        tower = self.spaces.chain_tower
        if p > n:
            raise DegreeError(f"cap of a {p}-cochain in degree {n}")
        if p == 0:
            return tower.r_mat(n, h.t_vec(phi))
        arr = self.cochain_space(p).full_array(phi)
        vmat = self._v_matrix(p, arr, n)
        # contract: z (x) a -> t(a) acting on the last factor of z
        d = h.base.dim
        qdst = tower.dim(n - p)
        rows = [dict() for _ in range(qdst)]
        for ai in range(d):
            rmat = tower.r_mat(n - p, h.t_vec({ai: f.one}))
            for ii, row in enumerate(rmat.rows):
                for z, c in row.items():
                    rows[ii][z * d + ai] = c
        contract = Matrix(f, qdst, qdst * d, rows)
        return contract @ vmat

    def _v_matrix(self, r: int, arr: Matrix, m: int) -> Matrix:
        """Evaluate an r-slot functional on the last r slots: Q_m -> Q_{m-r} (x) A."""
        f = self.field
        h = self.inst
        ud = h.udim
        d = h.base.dim
        tower = self.spaces.chain_tower
        key = (r, m, self._functional_key(arr))
        if key in self._v_memo:
            return self._v_memo[key]
        if r == 1:
            qprev = tower.dim(m - 1)
            amat = Matrix(f, d, ud, [dict() for _ in range(d)])
            for v in range(ud):
                for ai, c in arr.col(v).items():
                    amat.rows[ai][v] = c
            res = Matrix.identity(f, qprev).kron(amat) @ tower.layer_sect(m)
        else:
            qtarget = tower.dim(m - r) * d
            qprev = tower.dim(m - 1)
            rows = [dict() for _ in range(qtarget)]
            for v in range(ud):
                inner = self._v_matrix(r - 1, self._curry_last(arr, v), m - 1)
                for ii, row in enumerate(inner.rows):
                    for z, c in row.items():
                        rows[ii][z * ud + v] = c
            res = Matrix(f, qtarget, qprev * ud, rows) @ tower.layer_sect(m)
        self._v_memo[key] = res
        return res

    # -- Lie derivative and the cyclic cap ---------------------------------------

    def dim_or_zero(self, k: int) -> int:
        return self.bundle.dim(k) if k >= 0 else 0

    def lie(self, p: int, phi: dict, n: int) -> Matrix:
        """L_phi : C_n -> C_{n-p+1} on the plain chain complex."""
        f = self.field
        if p > n + 1:
            return Matrix.zeros(f, self.dim_or_zero(n - p + 1), self.bundle.dim(n))
        bundle = self.bundle
        if p == n + 1:
            # boundary degree: the cap against the cyclic differential in its
            # reduced-complex form s_{-1} N (the two agree after reduction;
            # the bracket representation picks out this form on the nose)
            iota = self.cap(p, phi, n + 1)
            mat = iota @ (bundle.s_minus1(n) @ bundle.N(n))
            if (p - 1) % 2:
                mat = mat.neg()
            return mat
        target = n - p + 1
        dprime = self.d_prime(p, phi, n)
        total = None
        for i in range(1, n - p + 2):
            mat = bundle.t_pow(target, n - p + 1 - i) @ dprime \
                @ bundle.t_pow(n, i + p)
            if theta_parity(n, p, i):
                mat = mat.neg()
            total = mat if total is None else total + mat
        for i in range(1, p + 1):
            mat = bundle.t_pow(target, n - p + 1) @ dprime @ bundle.t_pow(n, i)
            if xi_parity(n, p, i):
                mat = mat.neg()
            total = mat if total is None else total + mat
        if total is None:
            total = Matrix.zeros(f, self.dim_or_zero(target), bundle.dim(n))
        return total

    def s_op(self, p: int, phi: dict, n: int) -> Matrix:
        """S_phi : C_n -> C_{n-p+2}; zero for p > n."""
        f = self.field
        bundle = self.bundle
        if p > n:
            return Matrix.zeros(f, self.dim_or_zero(n - p + 2), bundle.dim(n))
        target = n - p + 1  # degree before the extra degeneracy
        dprime = self.d_prime(p, phi, n)
        sm1 = bundle.s_minus1(target)
        total = None
        for j in range(0, n - p + 1):
            for i in range(0, j + 1):
                mat = sm1 @ bundle.t_pow(target, n - p - i) @ dprime \
                    @ bundle.t_pow(n, n + i - j + 1)
                if eta_parity(n, p, j, i):
                    mat = mat.neg()
                total = mat if total is None else total + mat
        if total is None:
            total = Matrix.zeros(f, self.dim_or_zero(n - p + 2), bundle.dim(n))
        return total

    # -- descended operators ------------------------------------------------------

    def cap_on(self, complex_: QuotientComplex, p: int, phi: dict, n: int) -> Matrix:
        return complex_.induce(self.cap(p, phi, n), n, n - p)

    def lie_on(self, complex_: QuotientComplex, p: int, phi: dict, n: int) -> Matrix:
        return complex_.induce(self.lie(p, phi, n), n, n - p + 1)

    def s_on(self, complex_: QuotientComplex, p: int, phi: dict, n: int) -> Matrix:
        return complex_.induce(self.s_op(p, phi, n), n, n - p + 2)

    # -- the invariant cochain subcomplex ------------------------------------------

    def cochain_subcomplex_cm(self, p: int, n_max: int) -> Subspace:
        """Cochains whose insertion operators preserve im(id - T), degreewise.

        The conditions are imposed for chain degrees up to n_max, an
        over-approximation of the full definition except where a
        degree-independent characterisation applies.
        """
        key = (p, n_max)
        if key in self._cm_memo:
            return self._cm_memo[key]
        f = self.field
        bundle = self.bundle
        space = self.cochain_space(p)
        rows = []
        basis = self.cochain_basis(p)
        for n in range(max(p, 1) if p > 0 else 0, n_max + 1):
            target = n + 1 if p == 0 else n - p + 1
            if target < 0:
                continue
            ident_n = Matrix.identity(f, bundle.dim(n))
            src_img = (ident_n - bundle.T(n)).columns()
            if not any(src_img):
                continue
            ident_t = Matrix.identity(f, bundle.dim(target))
            _, _, im_t = rref_kernel_image(ident_t - bundle.T(target))
            from .linalg import quotient_by

            qt = quotient_by(im_t)
            top = n + 1 if p == 0 else n - p + 1
            for i in range(1, top + 1):
                mats = [qt.projection @ self.bullet(p, bv, n, i) for bv in basis]
                for w in src_img:
                    if not w:
                        continue
                    imgs = [mat.apply(w) for mat in mats]
                    coords_hit = set()
                    for img in imgs:
                        coords_hit.update(img)
                    for y in coords_hit:
                        row = {j: imgs[j][y] for j in range(len(basis))
                               if y in imgs[j]}
                        if row:
                            rows.append(row)
        if not rows:
            sub = Subspace.full(f, space.dim)
        else:
            mat = Matrix(f, len(rows), space.dim, rows)
            _, sub, _ = rref_kernel_image(mat)
        self._cm_memo[key] = sub
        return sub

    # -- closed-form oracles ---------------------------------------------------

    def _require_sayd(self):
        flags = self.bundle.flags
        if flags is None or not (flags.is_ayd and flags.is_stable):
            raise NotSaYD("closed form requires stable anti Yetter-Drinfeld coefficients")

    def _full_chain_matrix(self, cols, n_src: int, n_dst: int) -> Matrix:
        f = self.field
        tower = self.spaces.chain_tower
        amb_dst = tower.full_ambient_dim(n_dst)
        full = Matrix.from_cols(f, amb_dst, cols)
        return tower.full_proj(n_dst) @ full @ tower.full_sect(n_src)

    def _expand_slots(self, msum: dict, slot_vecs, coeff, out: dict, n_dst: int):
        f = self.field
        ud = self.inst.udim
        combos = [(0, coeff)]
        for sv in slot_vecs:
            new = []
            for idx0, c0 in combos:
                for j, cj in sv.items():
                    new.append((idx0 * ud + j, f.mul(c0, cj)))
            combos = new
        for idx0, c0 in combos:
            for mi, cm in msum.items():
                vec_axpy(f, out, f.mul(c0, cm),
                         {mi * (ud ** n_dst) + idx0: f.one})

    def lie_one_cochain_oracle(self, phi: dict, n: int) -> Matrix:
        """Two-part closed form of the Lie derivative of a 1-cochain.

        Valid on the cyclic quotient: an untwisted sum of insertions plus one
        twisted tail through the coaction.
        """
        f = self.field
        h = self.inst
        m = self.module
        ud = h.udim
        arr = self.cochain_space(1).full_array(phi)
        dphi = self.d_phi_full(1, phi)
        cols = []
        for z in range(m.dim):
            for tail in range(ud ** n):
                us = _digits(tail, ud, n)
                out: dict = {}
                for i in range(n):
                    slot_vecs = [({u: f.one} if q != i else dphi.col(u))
                                 for q, u in enumerate(us)]
                    self._expand_slots({z: f.one}, slot_vecs, f.one, out, n)
                # twisted tail
                def rec(q, plus, minus_prod, coeff):
                    if q == n:
                        for uc, m0, c0 in m.coaction_reps[z]:
                            mm = h.total.multiply(minus_prod, {uc: f.one})
                            val: dict = {}
                            for w, cw in mm.items():
                                vec_axpy(f, val, cw, arr.col(w))
                            tv = h.t_vec(val)
                            last = h.total.multiply({plus[-1]: f.one}, tv)
                            slot_vecs = [{p: f.one} for p in plus[:-1]] + [last]
                            self._expand_slots({m0: f.one}, slot_vecs,
                                               f.mul(coeff, c0), out, n)
                        return
                    for p, mn, c in h.translation_reps[us[q]]:
                        rec(q + 1, plus + [p],
                            h.total.multiply({mn: f.one}, minus_prod),
                            f.mul(coeff, c))

                rec(0, [], h.total.unit_vector(), f.one)
                cols.append(out)
        return self._full_chain_matrix(cols, n, n)

    def lie_sayd_oracle(self, p: int, phi: dict, n: int) -> Matrix:
        """Closed form of the Lie derivative for SaYD coefficients (cyclic case)."""
        self._require_sayd()
        f = self.field
        h = self.inst
        m = self.module
        ud = h.udim
        dphi = self.d_phi_full(p, phi)
        arr = self.cochain_space(p).full_array(phi)
        target = n - p + 1
        cols = []
        for z in range(m.dim):
            for tail in range(ud ** n):
                us = _digits(tail, ud, n)
                out: dict = {}
                # untwisted insertions
                for i in range(1, n - p + 2):
                    sl = i - 1
                    combos = [(0, f.one)]
                    for q, u in enumerate(us):
                        if q == sl:
                            blk = 0
                            for w in us[sl: sl + p]:
                                blk = blk * ud + w
                            vecs = [dphi.col(blk)]
                        elif sl < q < sl + p:
                            continue
                        else:
                            vecs = [{u: f.one}]
                        new = []
                        for idx0, c0 in combos:
                            for jdig, cj in vecs[0].items():
                                new.append((idx0 * ud + jdig, f.mul(c0, cj)))
                        combos = new
                    sgn = sign_of(f, theta_parity(n, p, i))
                    for idx0, c0 in combos:
                        vec_axpy(f, out, f.mul(sgn, c0),
                                 {z * (ud ** target) + idx0: f.one})
                # twisted part
                for i in range(0, p):
                    sgn = sign_of(f, xi_parity(n, p, i + 1))

                    def rec(q, legs, minus_prod, coeff):
                        if q == n:
                            emit(legs, minus_prod, coeff)
                            return
                        for pl, mn, c in h.translation_reps[us[q]]:
                            cc = f.mul(coeff, c)
                            nm = h.total.multiply({mn: f.one}, minus_prod)
                            if q <= i - 1:
                                for p1, p2, c2 in h.coproduct_reps[pl]:
                                    rec(q + 1, legs + [(p1, p2)], nm, f.mul(cc, c2))
                            else:
                                rec(q + 1, legs + [(None, pl)], nm, cc)

                    def emit(legs, minus_prod, coeff):
                        for uc, m0, c0 in m.coaction_reps[z]:
                            cx = f.mul(coeff, c0)
                            prod = h.total.unit_vector()
                            for q in range(i):
                                prod = h.total.multiply(prod, {legs[q][1]: f.one})
                            msum: dict = {}
                            for uu, cu in prod.items():
                                vec_axpy(f, msum, cu, m.action[uu].apply({m0: f.one}))
                            mm = h.total.multiply(minus_prod, {uc: f.one})
                            # phi-arguments: u^{n-|p|+i+1}_+ .. u^n_+, minus, first legs
                            arg_vecs = [{legs[q][1]: f.one}
                                        for q in range(n - p + i + 1, n)]
                            arg_vecs.append(mm)
                            arg_vecs.extend({legs[q][0]: f.one} for q in range(i))
                            acombos = [(0, cx)]
                            for av in arg_vecs:
                                new = []
                                for idx0, c1 in acombos:
                                    for jdig, cj in av.items():
                                        new.append((idx0 * ud + jdig, f.mul(c1, cj)))
                                acombos = new
                            val: dict = {}
                            for idx0, c1 in acombos:
                                vec_axpy(f, val, c1, arr.col(idx0))
                            tv = h.t_vec(val)
                            last = h.total.multiply({legs[n - p + i][1]: f.one}, tv)
                            slot_vecs = [{legs[q][1]: f.one}
                                         for q in range(i, n - p + i)] + [last]
                            self._expand_slots(msum, slot_vecs, sgn, out, target)

                    rec(0, [], h.total.unit_vector(), f.one)
                cols.append(out)
        return self._full_chain_matrix(cols, n, target)

    def s_sayd_oracle(self, p: int, phi: dict, n: int) -> Matrix:
        """Closed form of the homotopy operator for SaYD coefficients."""
        self._require_sayd()
        f = self.field
        h = self.inst
        m = self.module
        ud = h.udim
        dphi = self.d_phi_full(p, phi)
        target = n - p + 2
        cols = []
        for z in range(m.dim):
            for tail in range(ud ** n):
                us = _digits(tail, ud, n)
                out: dict = {}
                for i in range(0, n - p + 1):
                    for j in range(i + 1, n - p + 2):
                        par = (n * (i + p - 1) + (p - 1) * (j + i + 1)) % 2
                        sgn = sign_of(f, par)

                        def rec(q, legs, minus_prod, coeff):
                            if q == n:
                                emit(legs, minus_prod, coeff)
                                return
                            for pl, mn, c in h.translation_reps[us[q]]:
                                cc = f.mul(coeff, c)
                                nm = h.total.multiply({mn: f.one}, minus_prod)
                                if q <= i - 1:
                                    for p1, p2, c2 in h.coproduct_reps[pl]:
                                        rec(q + 1, legs + [(p1, p2)], nm,
                                            f.mul(cc, c2))
                                else:
                                    rec(q + 1, legs + [(None, pl)], nm, cc)

                        def emit(legs, minus_prod, coeff):
                            for uc, m0, c0 in m.coaction_reps[z]:
                                cx = f.mul(coeff, c0)
                                prod = h.total.unit_vector()
                                for q in range(i):
                                    prod = h.total.multiply(prod,
                                                            {legs[q][1]: f.one})
                                msum: dict = {}
                                for uu, cu in prod.items():
                                    vec_axpy(f, msum, cu,
                                             m.action[uu].apply({m0: f.one}))
                                mm = h.total.multiply(minus_prod, {uc: f.one})
                                # slots: u^{i+1}_+ ... with the D-block at
                                # u^j_+..u^{j+|p|}_+, then minus product, then
                                # the split-off first legs
                                blk_combos = [(0, f.one)]
                                for q in range(j - 1, j + p - 1):
                                    new = []
                                    for idx0, c1 in blk_combos:
                                        for jd, cj in {legs[q][1]: f.one}.items():
                                            new.append((idx0 * ud + jd,
                                                        f.mul(c1, cj)))
                                    blk_combos = new
                                dval: dict = {}
                                for idx0, c1 in blk_combos:
                                    vec_axpy(f, dval, c1, dphi.col(idx0))
                                slot_vecs = []
                                for q in range(i, j - 1):
                                    slot_vecs.append({legs[q][1]: f.one})
                                slot_vecs.append(dval)
                                for q in range(j + p - 1, n):
                                    slot_vecs.append({legs[q][1]: f.one})
                                slot_vecs.append(mm)
                                slot_vecs.extend({legs[q][0]: f.one}
                                                 for q in range(i))
                                self._expand_slots(msum, slot_vecs,
                                                   f.mul(sgn, cx), out, target)

                        rec(0, [], h.total.unit_vector(), f.one)
                cols.append(out)
        return self._full_chain_matrix(cols, n, target)

    # -- homogeneous decomposition (enveloping instances) ---------------------------

    def grading_projectors(self, grading) -> list[Matrix]:
        f = self.field
        d = self.inst.base.dim
        cols = []
        owners = []
        for ci, comp in enumerate(grading.components):
            for v in comp.basis_vectors():
                cols.append(v)
                owners.append(ci)
        basis = Matrix.from_cols(f, d, cols)
        from .linalg import LinearSolver

        solver = LinearSolver(basis.transpose())
        projs = []
        for ci in range(len(grading.components)):
            pcols = []
            for j in range(d):
                coeffs = solver.solve({j: f.one})
                out: dict = {}
                for k, c in coeffs.items():
                    if owners[k] == ci:
                        vec_axpy(f, out, c, cols[k])
                pcols.append(out)
            projs.append(Matrix.from_cols(f, d, pcols))
        return projs

    def cochain_tilde(self, p: int, phi: dict) -> Matrix:
        """The Hochschild form of a cochain: restrict all arguments to s(A)."""
        if self.inst.kind != "enveloping":
            raise ValueError("tilde form requires an enveloping instance")
        f = self.field
        arr = self.cochain_space(p).full_array(phi)
        emb = self.inst.source  # ud x d
        big = Matrix.identity(f, 1)
        for _ in range(p):
            big = big.kron(emb)
        return arr @ big  # d x d^p

    def cochain_from_tilde(self, p: int, tilde: Matrix) -> dict:
        """Inverse of the tilde form: phi((a (x) b)-tuple) = tilde(a) b_p...b_1."""
        if self.inst.kind != "enveloping":
            raise ValueError("tilde form requires an enveloping instance")
        f = self.field
        h = self.inst
        d = h.base.dim
        ud = h.udim
        rows = [dict() for _ in range(d)]
        for tail in range(ud ** p):
            us = _digits(tail, ud, p)
            avec = [u // d for u in us]
            bvec = [u % d for u in us]
            aidx = 0
            for s in avec:
                aidx = aidx * d + s
            val = tilde.col(aidx)
            if not val:
                continue
            prod = None
            for b in reversed(bvec):
                prod = {b: f.one} if prod is None else \
                    h.base.multiply(prod, {b: f.one})
            if prod is None:
                prod = h.base.unit_vector()
            out = h.base.multiply(val, prod)
            for ai, c in out.items():
                rows[ai][tail] = c
        full = Matrix(f, d, ud ** p, rows)
        return _cochain_coords_from_full(self.spaces, p, full)

    def homogeneous_components(self, p: int, phi: dict, grading) -> dict:
        """Split a cochain into automorphism-homogeneous pieces, by eigenvalue.

        The lambda-piece sends each graded part of the arguments, of total
        degree mu, into the (lambda mu)-component of the algebra; the pieces
        sum back to the cochain.  Keys are eigenvalue strings.
        """
        f = self.field
        d = self.inst.base.dim
        tilde = self.cochain_tilde(p, phi)
        projs = self.grading_projectors(grading)
        evs = list(grading.eigenvalues)
        # candidate ratios output-degree / input-degree
        lam_set: dict = {}
        in_degs = [f.one]
        for _ in range(p):
            in_degs = [f.mul(mu, ev) for mu in in_degs for ev in evs]
        seen = set()
        dedup_in = []
        for mu in in_degs:
            key = f.to_str(mu)
            if key not in seen:
                seen.add(key)
                dedup_in.append(mu)
        for nu in evs:
            for mu in dedup_in:
                lam = f.mul(nu, f.inv(mu))
                lam_set[f.to_str(lam)] = lam
        out: dict = {}
        for lam in lam_set.values():
            rows = [dict() for _ in range(d)]
            for tail in range(d ** p):
                digs = _digits(tail, d, p)
                # decompose the basis tensor into graded pieces slot by slot
                stack = [([], f.one, 0)]  # (component indices, coeff, index)
                for dig in digs:
                    new = []
                    for degs, cf, idx0 in stack:
                        for ci, proj2 in enumerate(projs):
                            v = proj2.apply({dig: f.one})
                            for jdig, cj in v.items():
                                new.append((degs + [ci], f.mul(cf, cj),
                                            idx0 * d + jdig))
                    stack = new
                for degs, cf, idx0 in stack:
                    mu = f.one
                    for ci in degs:
                        mu = f.mul(mu, evs[ci])
                    lam_mu = f.mul(lam, mu)
                    ti = next((k for k, ev in enumerate(evs) if f.eq(ev, lam_mu)),
                              None)
                    if ti is None:
                        continue  # the product degree is absent: piece is zero
                    val = tilde.col(idx0)
                    if not val:
                        continue
                    piece = projs[ti].apply(val)
                    for ai, c in piece.items():
                        s = f.add(rows[ai].get(tail, f.zero), f.mul(cf, c))
                        if f.is_zero(s):
                            rows[ai].pop(tail, None)
                        else:
                            rows[ai][tail] = s
            tilde_lam = Matrix(f, d, d ** p, rows)
            if not tilde_lam.is_zero():
                out[f.to_str(lam)] = self.cochain_from_tilde(p, tilde_lam)
        return out
