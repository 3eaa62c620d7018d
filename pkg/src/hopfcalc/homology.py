"""Exact homology of the built complexes and the induced structure on classes.

Homology spaces carry deterministic cycle representatives (complement of the
boundaries inside the cycles, chosen by the leftmost-pivot rule), and
operators descend to classes only after an explicit preservation check.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import NotAChainMapOnHomology
from .linalg import (
    LinearSolver,
    Matrix,
    Subspace,
    RowEchelon,
    rref_kernel_image,
)
from .report import VerificationReport


@dataclass(frozen=True)
class HomologySpace:
    degree: int
    dim: int
    cycle_reps: Matrix  # chain coords x dim, columns are chosen cycles
    reduction: Matrix   # class coords of a cycle (garbage off the cycles)
    kernel: Subspace
    boundaries: Subspace


def homology(complex_like, n: int) -> HomologySpace:
    """Homology of a complex object exposing b(n) and dim(n)."""
    f = complex_like.field if hasattr(complex_like, "field") else \
        complex_like.b(max(n, 1)).field
    bn = complex_like.b(n)
    _, ker, _ = rref_kernel_image(bn)
    if bn.nrows == 0:
        ker = Subspace.full(f, complex_like.dim(n))
    bnext = complex_like.b(n + 1)
    _, _, im = rref_kernel_image(bnext)
    return homology_from_spaces(f, n, ker, im)


def homology_from_spaces(f, n: int, ker: Subspace, im: Subspace) -> HomologySpace:
    ech = RowEchelon(f, ker.ambient_dim)
    for v in im.basis_vectors():
        ech.add(v)
    reps = []
    for v in ker.basis_vectors():
        if ech.add(dict(v)):
            reps.append(v)
    reps_mat = Matrix.from_cols(f, ker.ambient_dim, reps)
    # class coordinates: express a cycle as reps * x + boundaries * y
    cols = reps + im.basis_vectors()
    if cols:
        basis = Matrix.from_cols(f, ker.ambient_dim, cols)
        solver = LinearSolver(basis.transpose())
        # reduction acts through the pivot-row coordinate extraction of the
        # kernel, so it is linear on all chains and exact on cycles
        kmat = ker.basis
        pivots = [min(c) for c in kmat.columns()] if ker.dim else []
        rows = [dict() for _ in range(len(reps))]
        for kidx, kcol in enumerate(kmat.columns()):
            sol = solver.solve(kcol)
            piv = pivots[kidx]
            for ridx in range(len(reps)):
                c = sol.get(ridx)
                if c is not None:
                    rows[ridx][piv] = c
        reduction = Matrix(f, len(reps), ker.ambient_dim, rows)
    else:
        reduction = Matrix.zeros(f, 0, ker.ambient_dim)
    return HomologySpace(n, len(reps), reps_mat, reduction, ker, im)


def induced_map(op: Matrix, src: HomologySpace, dst: HomologySpace) -> Matrix:
    """Class-level matrix of a chain operator, with preservation checks."""
    for v in src.kernel.basis_vectors():
        img = op.apply(v)
        if img and not dst.kernel.contains_vec(img):
            raise NotAChainMapOnHomology("operator does not preserve cycles")
    for v in src.boundaries.basis_vectors():
        img = op.apply(v)
        if img and not dst.boundaries.contains_vec(img):
            raise NotAChainMapOnHomology("operator does not preserve boundaries")
    return dst.reduction @ op @ src.cycle_reps


# ---------------------------------------------------------------------------
# cochain-side homology (cohomology of a subcomplex of cochains)


@dataclass(frozen=True)
class CohomologySpace:
    degree: int
    dim: int
    rep_cochains: tuple  # class representatives as cochain coordinate dicts
    sub_basis: Subspace  # the subcomplex in ambient cochain coordinates
    reduction: Matrix    # class coords from subspace coordinates
    kernel_sub: Subspace  # cocycles, in subspace coordinates
    image_sub: Subspace   # coboundaries, in subspace coordinates


def cochain_cohomology(engine, p: int, n_max_cm: int) -> CohomologySpace:
    """Cohomology of the normalised invariant cochain complex in degree p."""
    f = engine.field
    sub_p = engine.reduced_cochain_subspace(p).intersection(
        engine.cochain_subcomplex_cm(p, n_max_cm))
    sub_next = engine.reduced_cochain_subspace(p + 1).intersection(
        engine.cochain_subcomplex_cm(p + 1, n_max_cm))
    dmat = engine.delta(p)
    solver_next = LinearSolver(sub_next.basis.transpose()) if sub_next.dim else None
    # delta restricted to subspace coordinates
    cols = []
    for v in sub_p.basis_vectors():
        img = dmat.apply(v)
        if not img:
            cols.append({})
            continue
        if solver_next is None:
            raise ValueError("coboundary leaves the normalised invariant complex")
        sol = solver_next.solve(img)
        if sol is None:
            raise ValueError("coboundary leaves the normalised invariant complex")
        cols.append(sol)
    d_sub = Matrix.from_cols(f, sub_next.dim, cols)
    _, ker, _ = rref_kernel_image(d_sub)
    if p == 0:
        im_prev = Subspace.zero(f, sub_p.dim)
    else:
        sub_prev = engine.reduced_cochain_subspace(p - 1).intersection(
            engine.cochain_subcomplex_cm(p - 1, n_max_cm))
        dprev = engine.delta(p - 1)
        solver_p = LinearSolver(sub_p.basis.transpose()) if sub_p.dim else None
        cols = []
        for v in sub_prev.basis_vectors():
            img = dprev.apply(v)
            sol = solver_p.solve(img) if solver_p else {}
            if sol is None:
                raise ValueError("coboundary leaves the normalised invariant complex")
            cols.append(sol if img else {})
        dprev_sub = Matrix.from_cols(f, sub_p.dim, cols)
        _, _, im_prev = rref_kernel_image(dprev_sub)
    hs = homology_from_spaces(f, p, ker, im_prev)
    reps = []
    for col in hs.cycle_reps.columns():
        reps.append(sub_p.basis.apply(col))
    return CohomologySpace(p, hs.dim, tuple(reps), sub_p, hs.reduction,
                           ker, im_prev)


def cohomology_class_of(space: CohomologySpace, coords: dict) -> dict:
    """Class coordinates of a cocycle given in ambient cochain coordinates."""
    solver = LinearSolver(space.sub_basis.basis.transpose())
    sub = solver.solve(coords)
    if sub is None:
        raise ValueError("cochain is not in the normalised invariant complex")
    return space.reduction.apply(sub)


def _br(engine, p, cf, q, cg):
    """Bracket treating any negative-degree input as zero."""
    if p < 0 or q < 0:
        return {}
    return engine.bracket(p, cf, q, cg)


# ---------------------------------------------------------------------------
# structure tables


@dataclass
class StructureTable:
    cohomology_dims: dict
    homology_dims: dict
    cup: dict       # (p, q) -> nested lists of class coords
    bracket: dict   # (p, q) -> nested lists
    cap_action: dict   # (p, n) -> per cohomology class: class matrix
    lie_action: dict   # (p, n) -> per cohomology class: class matrix
    b_action: dict     # n -> class matrix of the cyclic differential
    report: VerificationReport
    labels: dict


def structure_tables(engine, deg_max: int, n_max_cm: int | None = None) -> StructureTable:
    """Cup and bracket on cohomology classes, cap/Lie/B on homology classes,
    with the Gerstenhaber and Batalin-Vilkovisky axioms verified on classes."""
    f = engine.field
    rc = engine.reduced_cyclic
    if n_max_cm is None:
        n_max_cm = deg_max + 1
    report = VerificationReport()
    inst = engine.inst.name

    cohs = {p: cochain_cohomology(engine, p, n_max_cm) for p in range(deg_max + 2)}
    homs = {}
    for n in range(deg_max + 1):
        homs[n] = homology(rc, n)

    cup_table: dict = {}
    bracket_table: dict = {}
    for p in range(deg_max + 1):
        for q in range(deg_max + 1):
            if p + q > deg_max + 1:
                continue
            cup_pq = []
            br_pq = []
            for cf in cohs[p].rep_cochains:
                row_c = []
                row_b = []
                for cg in cohs[q].rep_cochains:
                    cup = engine.cup(p, cf, q, cg)
                    row_c.append(cohomology_class_of(cohs[p + q], cup)
                                 if p + q <= deg_max + 1 else None)
                    if p + q - 1 >= 0 and p + q - 1 <= deg_max + 1:
                        br = engine.bracket(p, cf, q, cg)
                        row_b.append(cohomology_class_of(cohs[p + q - 1], br))
                    else:
                        row_b.append({})
                cup_pq.append(row_c)
                br_pq.append(row_b)
            cup_table[(p, q)] = cup_pq
            bracket_table[(p, q)] = br_pq

    # graded commutativity and associativity of the cup on classes
    ok = True
    for p in range(deg_max + 1):
        for q in range(deg_max + 1 - p):
            for i, _ in enumerate(cohs[p].rep_cochains):
                for j, _ in enumerate(cohs[q].rep_cochains):
                    left = cup_table[(p, q)][i][j]
                    right = dict(cup_table[(q, p)][j][i])
                    if (p * q) % 2:
                        right = {k: f.neg(c) for k, c in right.items()}
                    if left != right:
                        ok = False
    report.record(ok, "cup_graded_commutative",
                  "a b = (-1)^{pq} b a on classes", inst)

    ok = True
    for p in range(deg_max + 1):
        for q in range(deg_max + 1 - p):
            for r in range(deg_max + 1 - p - q):
                for cf in cohs[p].rep_cochains:
                    for cg in cohs[q].rep_cochains:
                        for ch in cohs[r].rep_cochains:
                            left = engine.cup(p + q, engine.cup(p, cf, q, cg), r, ch)
                            right = engine.cup(p, cf, q + r, engine.cup(q, cg, r, ch))
                            la = cohomology_class_of(cohs[p + q + r], left)
                            ra = cohomology_class_of(cohs[p + q + r], right)
                            if la != ra:
                                ok = False
    report.record(ok, "cup_associative_on_classes", "(ab)c = a(bc)", inst)

    # graded Jacobi for the bracket on classes
    ok = True
    for p in range(deg_max + 1):
        for q in range(deg_max + 1 - p):
            for r in range(deg_max + 1 - p - q):
                for cf in cohs[p].rep_cochains:
                    for cg in cohs[q].rep_cochains:
                        for ch in cohs[r].rep_cochains:
                            t1 = _br(engine, p, cf, q + r - 1,
                                     _br(engine, q, cg, r, ch))
                            t2 = _br(engine, p + q - 1,
                                     _br(engine, p, cf, q, cg), r, ch)
                            t3 = _br(engine, q, cg, p + r - 1,
                                     _br(engine, p, cf, r, ch))
                            tgt = p + q + r - 2
                            if tgt < 0:
                                continue
                            acc = dict(t1)
                            from .linalg import vec_axpy

                            vec_axpy(f, acc, f.neg(f.one), t2)
                            sgn = f.one if ((p - 1) * (q - 1)) % 2 == 0 else f.neg(f.one)
                            vec_axpy(f, acc, f.neg(sgn), t3)
                            if acc and cohomology_class_of(cohs[tgt], acc):
                                ok = False
    report.record(ok, "bracket_jacobi_on_classes",
                  "{a,{b,c}} = {{a,b},c} + (-1) {b,{a,c}}", inst)

    # Leibniz on classes: {c, a b} = {c,a} b + (-1) a {c,b}
    ok = True
    for p in range(deg_max + 2):
        for q in range(deg_max + 1):
            for r in range(deg_max + 1 - q):
                if q + r + p - 1 > deg_max + 1 or p < 1:
                    continue
                for cc in cohs[p].rep_cochains:
                    for ca in cohs[q].rep_cochains:
                        for cb in cohs[r].rep_cochains:
                            lhs = _br(engine, p, cc, q + r,
                                      engine.cup(q, ca, r, cb))
                            t1 = engine.cup(p + q - 1,
                                            _br(engine, p, cc, q, ca), r, cb)
                            t2 = engine.cup(q, ca, p + r - 1,
                                            _br(engine, p, cc, r, cb))
                            from .linalg import vec_axpy

                            acc = dict(lhs)
                            vec_axpy(f, acc, f.neg(f.one), t1)
                            sgn = f.one if ((p - 1) * q) % 2 == 0 else f.neg(f.one)
                            vec_axpy(f, acc, f.neg(sgn), t2)
                            tgt = p + q + r - 1
                            if acc and cohomology_class_of(cohs[tgt], acc):
                                ok = False
    report.record(ok, "bracket_leibniz_on_classes",
                  "{c, a b} = {c,a} b + (-1)^{pq} a {c,b}", inst)

    # cap, Lie and B on homology classes
    cap_action: dict = {}
    lie_action: dict = {}
    b_action: dict = {}
    for n in range(deg_max + 1):
        try:
            bmat = rc.B(n)
            b_action[n] = induced_map(bmat, homs[n],
                                      homs.get(n + 1) or homology(rc, n + 1))
        except NotAChainMapOnHomology:
            b_action[n] = None
    for p in range(deg_max + 1):
        for n in range(p, deg_max + 1):
            caps = []
            lies = []
            for cf in cohs[p].rep_cochains:
                cap = engine.cap_on(rc, p, cf, n)
                caps.append(induced_map(cap, homs[n], homs[n - p]))
                if p <= n + 1 and n - p + 1 >= 0:
                    lie = engine.lie_on(rc, p, cf, n)
                    tgt = homs.get(n - p + 1)
                    if tgt is None:
                        tgt = homology(rc, n - p + 1)
                        homs[n - p + 1] = tgt
                    lies.append(induced_map(lie, homs[n], tgt))
            cap_action[(p, n)] = caps
            lie_action[(p, n)] = lies

    # Batalin-Vilkovisky axiom on classes: L = [B, cap]
    ok = True
    for p in range(deg_max + 1):
        for n in range(p, deg_max + 1):
            if n - p + 1 > deg_max:
                continue
            for idx, cf in enumerate(cohs[p].rep_cochains):
                lie_cls = lie_action[(p, n)][idx]
                if b_action.get(n - p) is None or b_action.get(n) is None:
                    continue
                first = b_action[n - p] @ cap_action[(p, n)][idx]
                second_chain = engine.cap_on(rc, p, cf, n + 1) @ rc.B(n)
                second = induced_map(second_chain, homs[n],
                                     homs.get(n - p + 1) or homology(rc, n - p + 1))
                if p % 2:
                    second = second.neg()
                if lie_cls != first - second:
                    ok = False
    report.record(ok, "bv_module_axiom_on_classes",
                  "L_a = B(a cap .) - (-1)^p a cap B(.)", inst)

    # mixed Leibniz on classes: L_{a cup b} = L_a iota_b + (-1)^p iota_a L_b
    ok = True
    for p in range(deg_max + 1):
        for q in range(deg_max + 1 - p):
            for n in range(p + q, deg_max + 1):
                if n - (p + q) + 1 > deg_max:
                    continue
                for cf in cohs[p].rep_cochains:
                    for cg in cohs[q].rep_cochains:
                        cup = engine.cup(p, cf, q, cg)
                        lhs_chain = engine.lie_on(rc, p + q, cup, n) \
                            if p + q <= n + 1 else None
                        if lhs_chain is None:
                            continue
                        tgt = homs.get(n - p - q + 1) or homology(rc, n - p - q + 1)
                        homs[n - p - q + 1] = tgt
                        lhs = induced_map(lhs_chain, homs[n], tgt)
                        t1c = engine.lie_on(rc, p, cf, n - q) @ \
                            engine.cap_on(rc, q, cg, n)
                        t1 = induced_map(t1c, homs[n], tgt)
                        t2c = engine.cap_on(rc, p, cf, n - q + 1) @ \
                            engine.lie_on(rc, q, cg, n) \
                            if q <= n + 1 else None
                        t2 = induced_map(t2c, homs[n], tgt)
                        if p % 2:
                            t2 = t2.neg()
                        if lhs != t1 + t2:
                            ok = False
    report.record(ok, "mixed_leibniz_on_classes",
                  "L_{a cup b} = L_a iota_b + (-1)^p iota_a L_b", inst)

    # commutator of cap and Lie on classes: [iota_b, L_a] = iota_{b,a}
    ok = True
    for p in range(deg_max + 1):
        for q in range(deg_max + 1 - p):
            for n in range(max(p + q, 1), deg_max + 1):
                if p > n - q + 2 or p + q - 1 > n - p + 1 + p:
                    pass
                for cf in cohs[p].rep_cochains:  # a = phi in C^p, Lie side
                    for cg in cohs[q].rep_cochains:  # b = psi in C^q, cap side
                        if p > n + 1 or n - p + 1 < q:
                            continue
                        tgt_deg = n - p - q + 1
                        if tgt_deg < 0 or tgt_deg > deg_max:
                            continue
                        tgt = homs.get(tgt_deg) or homology(rc, tgt_deg)
                        homs[tgt_deg] = tgt
                        t1c = engine.cap_on(rc, q, cg, n - p + 1) @ \
                            engine.lie_on(rc, p, cf, n)
                        t1 = induced_map(t1c, homs[n], tgt)
                        if n - q + 1 >= p:
                            t2c = engine.lie_on(rc, p, cf, n - q) @ \
                                engine.cap_on(rc, q, cg, n)
                            t2 = induced_map(t2c, homs[n], tgt)
                        else:
                            t2 = Matrix.zeros(f, tgt.dim, homs[n].dim)
                        if (q * (p - 1)) % 2:
                            t2 = t2.neg()
                        comm = t1 - t2
                        br = _br(engine, q, cg, p, cf)
                        if 0 <= q + p - 1 <= n:
                            capc = engine.cap_on(rc, p + q - 1, br, n)
                            rhs = induced_map(capc, homs[n], tgt)
                        else:
                            rhs = Matrix.zeros(f, tgt.dim, homs[n].dim)
                        if comm != rhs:
                            ok = False
    report.record(ok, "cap_lie_commutator_on_classes",
                  "[iota_b, L_a] = iota_{{b,a}}", inst)

    coh_dims = {p: cohs[p].dim for p in range(deg_max + 1)}
    hom_dims = {n: homs[n].dim for n in range(deg_max + 1)}
    return StructureTable(coh_dims, hom_dims, cup_table, bracket_table,
                          cap_action, lie_action, b_action, report, {})
