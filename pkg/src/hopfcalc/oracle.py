"""Independent second derivations: brute-force ranks and Hochschild operators.

Everything here is built directly from structure constants on plain tensor
powers, bypassing the quotient-tower machinery entirely, so that agreement
with the generic operators is a genuine two-path check.
"""
from __future__ import annotations

from .algebra import FinDimAlgebra
from .complexes import _digits
from .linalg import Matrix, RowEchelon, rank_of, vec_axpy
from .calculus import eta_parity, sign_of, theta_parity, xi_parity


# ---------------------------------------------------------------------------
# brute-force homology dimensions


def twisted_hochschild_boundary(a: FinDimAlgebra, sigma: Matrix, n: int) -> Matrix:
    """The simplicial boundary on A^(x)(n+1) with sigma-twisted last face."""
    f = a.field
    d = a.dim
    amb_src = d ** (n + 1)
    amb_dst = d ** n
    rows = [dict() for _ in range(amb_dst)]
    for v in range(amb_src):
        t = _digits(v, d, n + 1)
        mm, ys = t[0], t[1:]
        # face 0: a_n m (x) a_1 ... a_{n-1}
        for w, c in a.multiply({ys[-1]: f.one}, {mm: f.one}).items():
            idx = w
            for s in ys[:-1]:
                idx = idx * d + s
            vec_axpy(f, rows[idx], c, {v: f.one})

        def emit(idx_digits, coeff, sign_par):
            idx = 0
            for s in idx_digits:
                idx = idx * d + s
            val = coeff if sign_par % 2 == 0 else f.neg(coeff)
            sv = rows[idx].get(v, f.zero)
            sv = f.add(sv, val)
            if f.is_zero(sv):
                rows[idx].pop(v, None)
            else:
                rows[idx][v] = sv

        # middle faces i = 1..n-1 multiply a_{n-i} a_{n-i+1}
        for i in range(1, n):
            j = n - i  # 1-based position in ys
            for w, c in a.multiply({ys[j - 1]: f.one}, {ys[j]: f.one}).items():
                emit([mm] + ys[: j - 1] + [w] + ys[j + 1:], c, i)
        # face n: m sigma(a_1) (x) a_2 ...
        for w1, c1 in sigma.apply({ys[0]: f.one}).items():
            for w, c in a.multiply({mm: f.one}, {w1: f.one}).items():
                emit([w] + ys[1:], f.mul(c1, c), n)
    return Matrix(f, amb_dst, amb_src, rows)


def hochschild_homology_dims(a: FinDimAlgebra, sigma: Matrix, n_max: int) -> list:
    """Ranks of the twisted bar boundaries, turned into homology dimensions."""
    dims = []
    ranks = {}
    for n in range(1, n_max + 2):
        ranks[n] = rank_of(twisted_hochschild_boundary(a, sigma, n))
    for n in range(n_max + 1):
        amb = a.dim ** (n + 1)
        ker = amb - (ranks[n] if n >= 1 else 0)
        dims.append(ker - ranks[n + 1])
    return dims


def group_homology_dims(field, table, n_max: int) -> list:
    """Bar-complex ranks for group homology with trivial coefficients."""
    f = field
    g = len(table)

    def boundary(n):
        rows = [dict() for _ in range(g ** (n - 1))]
        for v in range(g ** n):
            t = _digits(v, g, n)

            def emit(idx_digits, coeff, par):
                idx = 0
                for s in idx_digits:
                    idx = idx * g + s
                val = coeff if par % 2 == 0 else f.neg(coeff)
                sv = rows[idx].get(v, f.zero)
                sv = f.add(sv, val)
                if f.is_zero(sv):
                    rows[idx].pop(v, None)
                else:
                    rows[idx][v] = sv

            emit(t[:-1], f.one, 0)  # counit on the last entry
            for i in range(1, n):
                j = n - i - 1  # multiply positions j, j+1 (0-based)
                emit(t[:j] + [table[t[j]][t[j + 1]]] + t[j + 2:], f.one, i)
            emit(t[1:], f.one, n)  # trivial action of the first entry
        return Matrix(f, g ** (n - 1), g ** n, rows)

    dims = []
    ranks = {n: rank_of(boundary(n)) for n in range(1, n_max + 2)}
    for n in range(n_max + 1):
        amb = g ** n
        ker = amb - (ranks[n] if n >= 1 else 0)
        dims.append(ker - ranks[n + 1])
    return dims


# ---------------------------------------------------------------------------
# Hochschild-side operators for enveloping instances with twisted coefficients


class HochschildOracle:
    """Direct operator formulas on A^(x)(n+1) for the enveloping instance."""

    def __init__(self, a: FinDimAlgebra, sigma: Matrix):
        self.alg = a
        self.sigma = sigma
        self.field = a.field

    def dim(self, n: int) -> int:
        return self.alg.dim ** (n + 1)

    def t(self, n: int) -> Matrix:
        f = self.field
        d = self.alg.dim
        rows = [dict() for _ in range(self.dim(n))]
        for v in range(self.dim(n)):
            t = _digits(v, d, n + 1)
            mm, ys = t[0], t[1:]
            if n == 0:
                for w, c in self.sigma.apply({mm: f.one}).items():
                    rows[w][v] = c
                continue
            for w, c in self.sigma.apply({ys[0]: f.one}).items():
                idx = w
                for s in ys[1:] + [mm]:
                    idx = idx * d + s
                rows[idx][v] = c
        return Matrix(f, self.dim(n), self.dim(n), rows)

    def T(self, n: int) -> Matrix:
        f = self.field
        out = self.sigma
        for _ in range(n):
            out = out.kron(self.sigma)
        return out

    def b(self, n: int) -> Matrix:
        return twisted_hochschild_boundary(self.alg, self.sigma, n)

    def connes_b(self, n: int) -> Matrix:
        """sum (-1)^{in} 1 (x) a_{i+1}..a_n (x) m (x) s(a_1)..s(a_i), reduced form."""
        f = self.field
        d = self.alg.dim
        one = self.alg.unit_vector()
        rows = [dict() for _ in range(self.dim(n + 1))]
        for v in range(self.dim(n)):
            t = _digits(v, d, n + 1)
            mm, ys = t[0], t[1:]
            for i in range(n + 1):
                sgn = sign_of(f, (i * n) % 2)
                tails = [({s: f.one}) for s in ys[i:]] + [{mm: f.one}] + \
                    [self.sigma.apply({s: f.one}) for s in ys[:i]]
                combos = [(0, sgn)]
                for tv in tails:
                    new = []
                    for idx0, c0 in combos:
                        for jd, cj in tv.items():
                            new.append((idx0 * d + jd, f.mul(c0, cj)))
                    combos = new
                for idx0, c0 in combos:
                    for om, cm in one.items():
                        key = om * (d ** (n + 1)) + idx0
                        sv = f.add(rows[key].get(v, f.zero), f.mul(c0, cm))
                        if f.is_zero(sv):
                            rows[key].pop(v, None)
                        else:
                            rows[key][v] = sv
        return Matrix(f, self.dim(n + 1), self.dim(n), rows)

    def cap(self, tilde: Matrix, p: int, n: int) -> Matrix:
        """tilde(a_{n-p+1},...,a_n) m (x) a_1 ... a_{n-p}."""
        f = self.field
        d = self.alg.dim
        rows = [dict() for _ in range(self.dim(n - p))]
        for v in range(self.dim(n)):
            t = _digits(v, d, n + 1)
            mm, ys = t[0], t[1:]
            blk = 0
            for s in ys[n - p:]:
                blk = blk * d + s
            val = tilde.col(blk)
            if not val:
                continue
            out = self.alg.multiply(val, {mm: f.one})
            for w, c in out.items():
                idx = w
                for s in ys[: n - p]:
                    idx = idx * d + s
                sv = f.add(rows[idx].get(v, f.zero), c)
                if f.is_zero(sv):
                    rows[idx].pop(v, None)
                else:
                    rows[idx][v] = sv
        return Matrix(f, self.dim(n - p), self.dim(n), rows)

    def lie(self, tilde: Matrix, p: int, n: int) -> Matrix:
        """The displayed twisted Lie derivative on the plain tensor space."""
        f = self.field
        d = self.alg.dim
        sg = self.sigma
        target = n - p + 1
        rows = [dict() for _ in range(self.dim(target))]
        for v in range(self.dim(n)):
            t = _digits(v, d, n + 1)
            mm, ys = t[0], t[1:]

            def add(mvec, slot_vecs, coeff):
                combos = [(0, coeff)]
                for sv_ in slot_vecs:
                    new = []
                    for idx0, c0 in combos:
                        for jd, cj in sv_.items():
                            new.append((idx0 * d + jd, f.mul(c0, cj)))
                    combos = new
                for idx0, c0 in combos:
                    for om, cm in mvec.items():
                        key = om * (d ** (target)) + idx0
                        val = f.add(rows[key].get(v, f.zero), f.mul(c0, cm))
                        if f.is_zero(val):
                            rows[key].pop(v, None)
                        else:
                            rows[key][v] = val

            # untwisted part: sigma everywhere, tilde block at slots i..i+p-1
            for i in range(1, n - p + 2):
                sgn = sign_of(f, theta_parity(n, p, i))
                blk = 0
                for s in ys[i - 1: i + p - 1]:
                    blk = blk * d + s
                bval = tilde.col(blk)
                if not bval and p > 0:
                    continue
                slot_vecs = []
                for q in range(i - 1):
                    slot_vecs.append(sg.apply({ys[q]: f.one}))
                slot_vecs.append(sg.apply(bval))
                for q in range(i + p - 1, n):
                    slot_vecs.append(sg.apply({ys[q]: f.one}))
                add(sg.apply({mm: f.one}), slot_vecs, sgn)
            # twisted part
            for i in range(1, p + 1):
                sgn = sign_of(f, xi_parity(n, p, i))
                # tilde(a_{n-p+i+...}) arguments: a_{n-|p|+i}..a_n, m, s(a_1)..s(a_{i-1})
                args = [{ys[q]: f.one} for q in range(n - p + i, n)]
                args.append({mm: f.one})
                args.extend(sg.apply({ys[q]: f.one}) for q in range(i - 1))
                combos = [(0, f.one)]
                for av in args:
                    new = []
                    for idx0, c0 in combos:
                        for jd, cj in av.items():
                            new.append((idx0 * d + jd, f.mul(c0, cj)))
                    combos = new
                val: dict = {}
                for idx0, c0 in combos:
                    vec_axpy(f, val, c0, tilde.col(idx0))
                mvec = sg.apply(val)
                slot_vecs = [sg.apply({ys[q]: f.one})
                             for q in range(i - 1, n - p + i)]
                add(mvec, slot_vecs, sgn)
        return Matrix(f, self.dim(target), self.dim(n), rows)

    def s_op(self, tilde: Matrix, p: int, n: int) -> Matrix:
        """The displayed twisted homotopy operator on the plain tensor space."""
        f = self.field
        d = self.alg.dim
        sg = self.sigma
        sg2 = sg @ sg
        target = n - p + 2
        one = self.alg.unit_vector()
        rows = [dict() for _ in range(self.dim(target))]
        for v in range(self.dim(n)):
            t = _digits(v, d, n + 1)
            mm, ys = t[0], t[1:]
            for j in range(0, n - p + 1):
                for i in range(0, j + 1):
                    sgn = sign_of(f, eta_parity(n, p, j, i))
                    # entries a_{n-p+1-j} .. a_n (sigma'd) with the tilde block
                    # at a_{n-p+i-j+1} .. a_{n+i-j}, then sigma(m), then
                    # sigma^2(a_1) .. sigma^2(a_{n-p-j})
                    start = n - p - j  # 0-based index of a_{n-p+1-j}
                    bstart = n - p + i - j  # 0-based of the block start
                    blk = 0
                    for q in range(bstart, bstart + p):
                        blk = blk * d + ys[q]
                    # sigma the block arguments
                    combos = [(0, f.one)]
                    for q in range(bstart, bstart + p):
                        new = []
                        for idx0, c0 in combos:
                            for jd, cj in sg.apply({ys[q]: f.one}).items():
                                new.append((idx0 * d + jd, f.mul(c0, cj)))
                        combos = new
                    bval: dict = {}
                    for idx0, c0 in combos:
                        vec_axpy(f, bval, c0, tilde.col(idx0))
                    slot_vecs = []
                    for q in range(start, bstart):
                        slot_vecs.append(sg.apply({ys[q]: f.one}))
                    slot_vecs.append(bval)
                    for q in range(bstart + p, n):
                        slot_vecs.append(sg.apply({ys[q]: f.one}))
                    slot_vecs.append(sg.apply({mm: f.one}))
                    for q in range(0, start):
                        slot_vecs.append(sg2.apply({ys[q]: f.one}))
                    combos = [(0, sgn)]
                    for sv_ in slot_vecs:
                        new = []
                        for idx0, c0 in combos:
                            for jd, cj in sv_.items():
                                new.append((idx0 * d + jd, f.mul(c0, cj)))
                        combos = new
                    for idx0, c0 in combos:
                        for om, cm in one.items():
                            key = om * (d ** target) + idx0
                            val = f.add(rows[key].get(v, f.zero), f.mul(c0, cm))
                            if f.is_zero(val):
                                rows[key].pop(v, None)
                            else:
                                rows[key][v] = val
        return Matrix(f, self.dim(target), self.dim(n), rows)


def chain_to_hochschild_iso(engine, n: int) -> Matrix:
    """The normal-form identification of the chain quotient with A^(x)(n+1).

    Sends m (x) (a_1 (x) b_1) (x) ... to b_n ... b_1 m (x) a_1 (x) ... (x) a_n.
    """
    if engine.inst.kind != "enveloping":
        raise ValueError("Hochschild identification needs an enveloping instance")
    f = engine.field
    h = engine.inst
    d = h.base.dim
    tower = engine.spaces.chain_tower
    full_sect = tower.full_sect(n)
    cols = []
    for z in range(tower.dim(n)):
        out: dict = {}
        for idx, c in full_sect.col(z).items():
            mm = idx // (h.udim ** n)
            tail = idx % (h.udim ** n)
            us = _digits(tail, h.udim, n)
            avec = [u // d for u in us]
            bvec = [u % d for u in us]
            prod = {mm: f.one}
            for bidx in reversed(bvec):
                prod = h.base.multiply({bidx: f.one}, prod)
            aidx = 0
            for s in avec:
                aidx = aidx * d + s
            for w, cw in prod.items():
                vec_axpy(f, out, f.mul(c, cw), {w * (d ** n) + aidx: f.one})
        cols.append(out)
    return Matrix.from_cols(f, d ** (n + 1), cols)


def hochschild_to_chain_iso(engine, n: int) -> Matrix:
    """Inverse identification: m (x) a-tuple to the class of m (x) (a_i (x) 1)."""
    f = engine.field
    h = engine.inst
    d = h.base.dim
    tower = engine.spaces.chain_tower
    full_proj = tower.full_proj(n)
    one = h.base.unit_vector()
    cols = []
    for v in range(d ** (n + 1)):
        t = _digits(v, d, n + 1)
        mm, avec = t[0], t[1:]
        combos = [(0, f.one)]
        for ai in avec:
            new = []
            for idx0, c0 in combos:
                for k, ck in one.items():
                    new.append((idx0 * h.udim + (ai * d + k), f.mul(c0, ck)))
            combos = new
        out: dict = {}
        for idx0, c0 in combos:
            out[mm * (h.udim ** n) + idx0] = c0
        cols.append(full_proj.apply(out))
    return Matrix.from_cols(f, tower.dim(n), cols)
