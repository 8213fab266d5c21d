"""Graded free modules and the Buchberger engine for their submodules.

A module element of R^r is a dict mapping (position, exponent tuple) to a
nonzero coefficient. Division, reduced Groebner bases, syzygies (via an
augmented elimination computation and via Schreyer orders), lifting through a
matrix, and membership tests all live here; ideals are the rank-1 case.
"""

from __future__ import annotations

from .polyring import (
    GrevLex,
    NonGlobalOrderError,
    Polynomial,
    mono_div,
    mono_divides,
    mono_lcm,
    mono_mul,
)


# ---------------------------------------------------------------------------
# free modules and matrices


class FreeModule:
    """Free module R^rank with one multidegree shift per basis element."""

    __slots__ = ("ring", "rank", "shifts")

    def __init__(self, ring, rank, shifts=None):
        if rank < 0:
            raise ValueError("rank must be >= 0")
        if shifts is None:
            shifts = tuple(ring.zero_degree for _ in range(rank))
        else:
            shifts = tuple(tuple(s) for s in shifts)
        if len(shifts) != rank:
            raise ValueError("need one shift per basis element")
        self.ring = ring
        self.rank = rank
        self.shifts = shifts

    def __eq__(self, other):
        return (
            isinstance(other, FreeModule)
            and self.ring == other.ring
            and self.shifts == other.shifts
        )

    def __hash__(self):
        return hash((self.ring, self.shifts))

    def __repr__(self):
        return "Free(rank=%d, shifts=%s)" % (self.rank, list(self.shifts))

    def basis_vector(self, pos):
        zed = (0,) * self.ring.nvars
        return {(pos, zed): self.ring.field.one}

    def dual(self):
        negated = tuple(tuple(-x for x in s) for s in self.shifts)
        return FreeModule(self.ring, self.rank, negated)


class ModuleMatrix:
    """Map between free modules, stored column-by-column (images of basis)."""

    __slots__ = ("source", "target", "columns")

    def __init__(self, source, target, columns):
        if len(columns) != source.rank:
            raise ValueError("need one column per source basis element")
        self.source = source
        self.target = target
        self.columns = tuple(dict(c) for c in columns)

    @property
    def ring(self):
        return self.target.ring

    def entry(self, r, c):
        ring = self.ring
        out = {}
        for (pos, e), coeff in self.columns[c].items():
            if pos == r:
                out[e] = coeff
        return Polynomial(ring, out)

    def rows(self):
        """Rows as elements of R^(source.rank): row r collects position-r entries."""
        out = [dict() for _ in range(self.target.rank)]
        for c, col in enumerate(self.columns):
            for (pos, e), coeff in col.items():
                out[pos][(c, e)] = coeff
        return out

    def dual_map(self):
        """Hom(-, R) applied to this map: transpose with negated shifts."""
        return ModuleMatrix(self.target.dual(), self.source.dual(), self.rows())

    def apply(self, v):
        """Image of a source vector v (dict over source positions)."""
        out = {}
        for (pos, e), coeff in v.items():
            for (p2, e2), c2 in self.columns[pos].items():
                k = (p2, mono_mul(e, e2))
                nc = out.get(k)
                nc = coeff * c2 if nc is None else nc + coeff * c2
                if nc:
                    out[k] = nc
                elif k in out:
                    del out[k]
        return out

    def compose(self, other):
        """self o other as a matrix (other's target must be self's source)."""
        cols = [self.apply(c) for c in other.columns]
        return ModuleMatrix(other.source, self.target, cols)

    def is_zero(self):
        return all(not c for c in self.columns)


def vec_is_zero(v):
    return not v


def vec_scale(v, c):
    return {k: x * c for k, x in v.items()}


def vec_add(u, v):
    out = dict(u)
    for k, c in v.items():
        nc = out.get(k)
        nc = c if nc is None else nc + c
        if nc:
            out[k] = nc
        elif k in out:
            del out[k]
    return out


def vec_sub(u, v):
    out = dict(u)
    for k, c in v.items():
        nc = out.get(k)
        nc = -c if nc is None else nc - c
        if nc:
            out[k] = nc
        elif k in out:
            del out[k]
    return out


def vec_mul_term(v, e, c):
    return {(pos, mono_mul(e2, e)): c2 * c for (pos, e2), c2 in v.items()}


def vec_degree(v, free_module):
    """Multidegree of a homogeneous vector; raises if not homogeneous."""
    ring = free_module.ring
    degs = set()
    for (pos, e) in v:
        d = ring.monomial_degree(e)
        s = free_module.shifts[pos]
        degs.add(tuple(a + b for a, b in zip(d, s)))
    if len(degs) != 1:
        raise ValueError("vector is zero or not homogeneous")
    return next(iter(degs))


def vec_is_homogeneous(v, free_module):
    if not v:
        return True
    try:
        vec_degree(v, free_module)
        return True
    except ValueError:
        return False


# ---------------------------------------------------------------------------
# module orders


class ModuleOrder:
    def key(self, pos, e):
        raise NotImplementedError


class PositionOverTerm(ModuleOrder):
    """Compare positions first (e_0 largest), then the ring order."""

    def __init__(self, ring_order):
        self.ring_order = ring_order
        self.is_global = ring_order.is_global

    def key(self, pos, e):
        return (-pos,) + tuple(self.ring_order.key(e))


class TermOverPosition(ModuleOrder):
    """Compare ring monomials first, then positions (e_0 largest)."""

    def __init__(self, ring_order):
        self.ring_order = ring_order
        self.is_global = ring_order.is_global

    def key(self, pos, e):
        return tuple(self.ring_order.key(e)) + (-pos,)


class SchreyerOrder(ModuleOrder):
    """Order induced by the leads of the previous level's Groebner basis.

    m*e_p is compared by first comparing m*lead(g_p) in the previous module's
    order, with ties broken by position (smaller position larger).
    """

    def __init__(self, base_order, leads):
        self.base_order = base_order
        self.leads = tuple(leads)
        self._cache = {}

    def key(self, pos, e):
        k = self._cache.get((pos, e))
        if k is None:
            lp, le = self.leads[pos]
            k = tuple(self.base_order.key(lp, mono_mul(e, le))) + (-pos,)
            self._cache[(pos, e)] = k
        return k


def vec_lead(v, order):
    """((pos, exps), coeff) of the largest term."""
    k = max(v, key=lambda t: order.key(*t))
    return k, v[k]


def vec_terms_sorted(v, order):
    return sorted(v.items(), key=lambda t: order.key(*t[0]), reverse=True)


# ---------------------------------------------------------------------------
# division


class _Entry:
    __slots__ = ("vec", "lead_pos", "lead_exps", "lc", "sugar")

    def __init__(self, vec, order, sugar=None):
        (pos, e), c = vec_lead(vec, order)
        self.vec = vec
        self.lead_pos = pos
        self.lead_exps = e
        self.lc = c
        if sugar is None:
            sugar = max(sum(e2) for (_, e2) in vec)
        self.sugar = sugar


class PreparedBasis:
    """Divisor lookup structure for a list of module elements."""

    def __init__(self, vectors, order, sugars=None):
        self.order = order
        self.entries = []
        self.by_pos = {}
        for i, v in enumerate(vectors):
            s = sugars[i] if sugars is not None else None
            self.add(v, sugar=s)

    def add(self, vec, sugar=None):
        e = _Entry(vec, self.order, sugar)
        self.entries.append(e)
        self.by_pos.setdefault(e.lead_pos, []).append(len(self.entries) - 1)
        return e

    def __len__(self):
        return len(self.entries)


def module_reduce(v, basis, record=False):
    """Full normal form of v against a PreparedBasis.

    Returns (remainder, quotients) where quotients maps basis index to a
    coefficient dict {exps: coeff} with v = sum quotients[i]*g_i + remainder.
    quotients is None unless record is True.
    """
    order = basis.order
    work = dict(v)
    rem = {}
    quo = {} if record else None
    keyf = order.key
    entries = basis.entries
    by_pos = basis.by_pos
    while work:
        kmax = max(work, key=lambda t: keyf(*t))
        pos, e = kmax
        c = work[kmax]
        red = None
        for idx in by_pos.get(pos, ()):
            if mono_divides(entries[idx].lead_exps, e):
                red = idx
                break
        if red is None:
            rem[kmax] = c
            del work[kmax]
            continue
        ent = entries[red]
        q = mono_div(e, ent.lead_exps)
        factor = c / ent.lc
        for (p2, e2), c2 in ent.vec.items():
            k2 = (p2, mono_mul(e2, q))
            nc = work.get(k2)
            nc = -(factor * c2) if nc is None else nc - factor * c2
            if nc:
                work[k2] = nc
            elif k2 in work:
                del work[k2]
        if record:
            d = quo.setdefault(red, {})
            nc = d.get(q)
            nc = factor if nc is None else nc + factor
            if nc:
                d[q] = nc
            elif q in d:
                del d[q]
    return rem, quo


def module_normal_form(v, vectors, order):
    basis = vectors if isinstance(vectors, PreparedBasis) else PreparedBasis(vectors, order)
    rem, _ = module_reduce(v, basis)
    return rem


# ---------------------------------------------------------------------------
# Buchberger


class _Pair:
    __slots__ = ("i", "j", "lcm", "sugar", "key")

    def __init__(self, i, j, lcm, sugar):
        self.i = i
        self.j = j
        self.lcm = lcm
        self.sugar = sugar
        self.key = (sum(lcm), sugar, i, j)


def _spoly(gi, gj, lcm, field):
    qi = mono_div(lcm, gi.lead_exps)
    qj = mono_div(lcm, gj.lead_exps)
    a = vec_mul_term(gi.vec, qi, field.one / gi.lc)
    b = vec_mul_term(gj.vec, qj, field.one / gj.lc)
    return vec_sub(a, b)


def _pair_sugar(gi, gj, lcm):
    return max(
        gi.sugar + sum(lcm) - sum(gi.lead_exps),
        gj.sugar + sum(lcm) - sum(gj.lead_exps),
    )


def _gm_update(basis, pairs, new_entry, rank1):
    """Gebauer-Moeller pair update; pairs only between same-position leads."""
    entries = basis.entries
    m = len(entries) - 1  # new_entry index
    ef = new_entry.lead_exps
    posf = new_entry.lead_pos
    kept = []
    for pr in pairs:
        gi, gj = entries[pr.i], entries[pr.j]
        if (
            gi.lead_pos == posf
            and mono_divides(ef, pr.lcm)
            and mono_lcm(gi.lead_exps, ef) != pr.lcm
            and mono_lcm(gj.lead_exps, ef) != pr.lcm
        ):
            continue
        kept.append(pr)
    cand = {}
    for i in range(m):
        gi = entries[i]
        if gi.lead_pos != posf:
            continue
        L = mono_lcm(gi.lead_exps, ef)
        cand.setdefault(L, []).append(i)
    minimal = []
    for L in sorted(cand, key=lambda L: (sum(L), L)):
        if not any(mono_divides(Lm, L) for Lm in minimal):
            minimal.append(L)
    for L in minimal:
        idxs = cand[L]
        if rank1 and any(
            mono_mul(entries[i].lead_exps, ef) == L for i in idxs
        ):
            continue  # product criterion, valid only for ideals
        i = min(idxs)
        kept.append(_Pair(i, m, L, _pair_sugar(entries[i], new_entry, L)))
    return kept


def module_buchberger(vectors, order, ring, reduced=True):
    """Reduced Groebner basis of the submodule generated by the vectors.

    Returns a list of monic module elements sorted by ascending lead. The
    result is canonical: it depends only on the submodule and the order.
    """
    if not getattr(order, "is_global", True):
        raise NonGlobalOrderError("Groebner bases need a global order")
    rank1 = all(pos == 0 for v in vectors for (pos, _) in v)
    basis = PreparedBasis([], order)
    pairs = []
    field = ring.field
    for v in vectors:
        if not v:
            continue
        ent = basis.add(dict(v))
        pairs = _gm_update(basis, pairs, ent, rank1)
    while pairs:
        pr = min(pairs, key=lambda p: p.key)
        pairs.remove(pr)
        gi, gj = basis.entries[pr.i], basis.entries[pr.j]
        s = _spoly(gi, gj, pr.lcm, field)
        h, _ = module_reduce(s, basis)
        if h:
            ent = basis.add(h, sugar=pr.sugar)
            pairs = _gm_update(basis, pairs, ent, rank1)
    gb = [e.vec for e in basis.entries]
    if reduced:
        return _reduce_basis(gb, order, ring)
    return gb


def _reduce_basis(gb, order, ring):
    """Interreduce to the unique reduced, monic, lead-sorted basis."""
    field = ring.field
    leads = [vec_lead(v, order) for v in gb]
    idxs = sorted(range(len(gb)), key=lambda i: order.key(*leads[i][0]))
    kept = []
    for i in idxs:
        (pos, e), _ = leads[i]
        redundant = False
        for j in kept:
            (p2, e2), _ = leads[j]
            if p2 == pos and mono_divides(e2, e):
                redundant = True
                break
        if not redundant:
            kept.append(i)
    vecs = [vec_scale(gb[i], field.one / leads[i][1]) for i in kept]
    changed = True
    while changed:
        changed = False
        for i in range(len(vecs)):
            others = PreparedBasis(vecs[:i] + vecs[i + 1:], order)
            r, _ = module_reduce(vecs[i], others)
            if r != vecs[i]:
                changed = True
            if not r:
                continue
            (p, e), c = vec_lead(r, order)
            vecs[i] = vec_scale(r, field.one / c)
        vecs = [v for v in vecs if v]
    vecs.sort(key=lambda v: order.key(*vec_lead(v, order)[0]))
    return vecs


# ---------------------------------------------------------------------------
# syzygies, lifting, membership


def _augmented_gb(columns, target_rank, ring, order=None):
    """GB of the graph module {(col_i, e_i)} under an elimination order."""
    base = order or PositionOverTerm(GrevLex())
    aug = []
    zed = (0,) * ring.nvars
    for i, col in enumerate(columns):
        v = dict(col)
        v[(target_rank + i, zed)] = ring.field.one
        aug.append(v)
    gb = module_buchberger(aug, base, ring)
    return gb, base


def module_syzygies(columns, target_rank, ring):
    """Generators of the syzygy module of the given columns of R^target_rank."""
    gb, base = _augmented_gb(columns, target_rank, ring)
    syz = []
    for v in gb:
        if any(pos < target_rank for (pos, _) in v):
            continue
        syz.append({(pos - target_rank, e): c for (pos, e), c in v.items()})
    return syz


class LiftSolver:
    """Expresses vectors in terms of fixed columns of a free module."""

    def __init__(self, columns, target_rank, ring):
        self.columns = [dict(c) for c in columns]
        self.target_rank = target_rank
        self.ring = ring
        self._gb, self._order = _augmented_gb(self.columns, target_rank, ring)
        self._prepared = PreparedBasis(self._gb, self._order)

    def lift(self, v):
        """x with columns * x = v, or None if v is not in the column span."""
        rem, _ = module_reduce(dict(v), self._prepared)
        if any(pos < self.target_rank for (pos, _) in rem):
            return None
        return {(pos - self.target_rank, e): -c for (pos, e), c in rem.items()}

    def contains(self, v):
        rem, _ = module_reduce(dict(v), self._prepared)
        return not any(pos < self.target_rank for (pos, _) in rem)


def schreyer_step(gb_vectors, order, ring):
    """Syzygies of a Groebner basis, themselves a GB under the Schreyer order.

    Returns (syzygies, schreyer_order). Every syzygy is monic with lead
    (lcm/lm_i) e_i for some pair i < j of same-position leads; for each fixed
    i only pairs with divisibility-minimal quotient monomials are kept, which
    still generates the initial module of the syzygy module.
    """
    field = ring.field
    entries = [_Entry(dict(v), order) for v in gb_vectors]
    basis = PreparedBasis([], order)
    for e in entries:
        basis.add(dict(e.vec), sugar=e.sugar)
    leads = [(e.lead_pos, e.lead_exps) for e in entries]
    sorder = SchreyerOrder(order, leads)
    by_pos = {}
    for i, e in enumerate(entries):
        by_pos.setdefault(e.lead_pos, []).append(i)
    syzygies = []
    for pos, idxs in sorted(by_pos.items()):
        for a, i in enumerate(idxs):
            quots = []
            for j in idxs[a + 1:]:
                L = mono_lcm(entries[i].lead_exps, entries[j].lead_exps)
                quots.append((mono_div(L, entries[i].lead_exps), j, L))
            quots.sort(key=lambda t: (sum(t[0]), t[0], t[1]))
            kept_q = []
            for (q, j, L) in quots:
                if any(mono_divides(q2, q) for (q2, _, _) in kept_q):
                    continue
                kept_q.append((q, j, L))
            for (qi, j, L) in kept_q:
                gi, gj = entries[i], entries[j]
                qj = mono_div(L, gj.lead_exps)
                s = _spoly(gi, gj, L, field)
                rem, quo = module_reduce(s, basis, record=True)
                if rem:
                    raise AssertionError("S-pair of a Groebner basis did not reduce to 0")
                syz = {(i, qi): field.one / gi.lc}
                key_j = (j, qj)
                c = syz.get(key_j, field.zero) - field.one / gj.lc
                if c:
                    syz[key_j] = c
                elif key_j in syz:
                    del syz[key_j]
                if quo:
                    for l, qd in quo.items():
                        for qe, qc in qd.items():
                            k = (l, qe)
                            nc = syz.get(k)
                            nc = -qc if nc is None else nc - qc
                            if nc:
                                syz[k] = nc
                            elif k in syz:
                                del syz[k]
                (lp, le), lc = vec_lead(syz, sorder)
                if (lp, le) != (i, qi):
                    raise AssertionError("Schreyer lead mismatch")
                syzygies.append(vec_scale(syz, field.one / lc))
    return syzygies, sorder
