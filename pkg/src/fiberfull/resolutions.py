"""Graded free resolutions, Betti tables, and Hilbert functions.

Resolutions are built from a level-one reduced Groebner basis followed by
iterated Schreyer-order syzygy steps, then minimalized by cancelling unit
pivots. Hilbert functions count standard monomials under initial modules,
evaluated through Hilbert-series numerators of monomial ideals.
"""

from __future__ import annotations

from .polyring import GrevLex, Polynomial, mono_divides
from .modules import (
    FreeModule,
    ModuleMatrix,
    PositionOverTerm,
    module_buchberger,
    module_syzygies,
    schreyer_step,
    vec_degree,
    vec_is_homogeneous,
)


class GradedResolution:
    """Chain F_0 <- F_1 <- ... of graded free modules with differentials.

    `complete` records whether the last kernel was seen to vanish (so the
    chain is a full resolution rather than a truncation).
    """

    def __init__(self, modules, differentials, minimal=False, complete=False):
        if len(modules) != len(differentials) + 1:
            raise ValueError("need one differential between consecutive modules")
        self.modules = tuple(modules)
        self.differentials = tuple(differentials)
        self.minimal = minimal
        self.complete = complete

    @property
    def ring(self):
        return self.modules[0].ring

    @property
    def length(self):
        return len(self.differentials)

    def module(self, i):
        if 0 <= i < len(self.modules):
            return self.modules[i]
        return FreeModule(self.ring, 0)

    def differential(self, i):
        """d_i: F_i -> F_{i-1}; zero map outside the computed range."""
        if 1 <= i <= self.length:
            return self.differentials[i - 1]
        return ModuleMatrix(self.module(i), self.module(i - 1), [{}] * self.module(i).rank)

    def ranks(self):
        return tuple(m.rank for m in self.modules)

    def __repr__(self):
        return "GradedResolution(ranks=%s, minimal=%s)" % (list(self.ranks()), self.minimal)


def quotient_presentation(I):
    """Presentation matrix R^s -> R of R/I (columns are the generators)."""
    ring = I.ring
    target = FreeModule(ring, 1)
    cols = []
    shifts = []
    for g in I.gens:
        cols.append({(0, e): c for e, c in g.coeffs.items()})
        shifts.append(g.multidegree() if g.is_homogeneous() else ring.zero_degree)
    source = FreeModule(ring, len(cols), shifts)
    return ModuleMatrix(source, target, cols)


def syzygies(matrix):
    """Matrix whose columns generate the kernel of the given matrix."""
    ring = matrix.ring
    syz = module_syzygies(list(matrix.columns), matrix.target.rank, ring)
    shifts = []
    for v in syz:
        if vec_is_homogeneous(v, matrix.source) and v:
            shifts.append(vec_degree(v, matrix.source))
        else:
            shifts.append(ring.zero_degree)
    src = FreeModule(ring, len(syz), shifts)
    return ModuleMatrix(src, matrix.source, syz)


def free_resolution(presentation, length_cap):
    """Free resolution of coker(presentation), of length <= length_cap.

    Not minimal in general; exact away from homological position 0.
    """
    if length_cap < 0:
        raise ValueError("length_cap must be >= 0")
    ring = presentation.ring
    modules = [presentation.target]
    diffs = []
    if length_cap == 0:
        return GradedResolution(modules, diffs, complete=False)
    order = PositionOverTerm(GrevLex())
    gb = module_buchberger(list(presentation.columns), order, ring)
    current = gb
    complete = not current
    while current and len(diffs) < length_cap:
        prev = modules[-1]
        shifts = [vec_degree(v, prev) for v in current]
        Fk = FreeModule(ring, len(current), shifts)
        diffs.append(ModuleMatrix(Fk, prev, current))
        modules.append(Fk)
        if len(diffs) == length_cap:
            break
        current, order = schreyer_step(current, order, ring)
        if not current:
            complete = True
            break
    return GradedResolution(modules, diffs, complete=complete)


def _entry_grid(matrix):
    """Dense entry grid grid[r][c] -> Polynomial for in-place pruning."""
    ring = matrix.ring
    nr, nc = matrix.target.rank, matrix.source.rank
    grid = [[{} for _ in range(nc)] for _ in range(nr)]
    for c, col in enumerate(matrix.columns):
        for (pos, e), coeff in col.items():
            grid[pos][c][e] = coeff
    return [[Polynomial(ring, cell) for cell in row] for row in grid]


def _grid_to_matrix(grid, ring, src_shifts, tgt_shifts):
    nr = len(tgt_shifts)
    nc = len(src_shifts)
    cols = []
    for c in range(nc):
        col = {}
        for r in range(nr):
            for e, coeff in grid[r][c].coeffs.items():
                col[(r, e)] = coeff
        cols.append(col)
    return ModuleMatrix(
        FreeModule(ring, nc, src_shifts), FreeModule(ring, nr, tgt_shifts), cols
    )


def _find_unit(grid):
    for c in range(len(grid[0]) if grid else 0):
        for r in range(len(grid)):
            f = grid[r][c]
            if f.coeffs and f.is_constant():
                return r, c
    return None


def minimalize(resolution):
    """Homotopy-equivalent resolution with all entries in the irrelevant ideal."""
    ring = resolution.ring
    grids = [_entry_grid(d) for d in resolution.differentials]
    shifts = [list(m.shifts) for m in resolution.modules]
    changed = True
    while changed:
        changed = False
        for i in range(len(grids)):
            A = grids[i]
            if not A or not A[0]:
                continue
            hit = _find_unit(A)
            if hit is None:
                continue
            changed = True
            r, c = hit
            u = A[r][c].constant_coefficient()
            nr, nc = len(A), len(A[0])
            lambdas = {b: A[r][b].scale(ring.field.one / u) for b in range(nc) if b != c}
            for b, lam in lambdas.items():
                if lam.is_zero():
                    continue
                for a in range(nr):
                    A[a][b] = A[a][b] - lam * A[a][c]
            if i + 1 < len(grids):
                B = grids[i + 1]
                for b, lam in lambdas.items():
                    if lam.is_zero():
                        continue
                    for w in range(len(B[0]) if B else 0):
                        B[c][w] = B[c][w] + lam * B[b][w]
            if i - 1 >= 0:
                C = grids[i - 1]
                for a in range(nr):
                    if a == r:
                        continue
                    mu = A[a][c].scale(ring.field.one / u)
                    if mu.is_zero():
                        continue
                    for w in range(len(C)):
                        C[w][r] = C[w][r] + mu * C[w][a]
            grids[i] = [
                [A[a][b] for b in range(nc) if b != c] for a in range(nr) if a != r
            ]
            del shifts[i + 1][c]
            del shifts[i][r]
            if i + 1 < len(grids):
                grids[i + 1] = [row for bi, row in enumerate(grids[i + 1]) if bi != c]
    trimmed_grids = []
    trimmed_shifts = [shifts[0]]
    for i, g in enumerate(grids):
        if not shifts[i + 1]:
            break
        trimmed_grids.append(g)
        trimmed_shifts.append(shifts[i + 1])
    modules = [FreeModule(ring, len(s), s) for s in trimmed_shifts]
    diffs = [
        _grid_to_matrix(g, ring, trimmed_shifts[i + 1], trimmed_shifts[i])
        for i, g in enumerate(trimmed_grids)
    ]
    complete = resolution.complete or len(modules) < len(resolution.modules)
    return GradedResolution(modules, diffs, minimal=True, complete=complete)


def is_minimal(resolution):
    for d in resolution.differentials:
        for col in d.columns:
            for (pos, e), _ in col.items():
                if all(x == 0 for x in e):
                    return False
    return True


_res_cache = {}


def minimal_resolution_of_quotient(I, length_cap=None):
    """Minimal graded free resolution of R/I (cached per ideal)."""
    ring = I.ring
    cap = length_cap if length_cap is not None else ring.nvars + 1
    key = (I.key(), cap)
    res = _res_cache.get(key)
    if res is None:
        res = minimalize(free_resolution(quotient_presentation(I), cap))
        _res_cache[key] = res
    return res


class BettiTable:
    """Graded Betti numbers beta_{i,j} of a quotient R/I."""

    def __init__(self, ring, entries):
        self.ring = ring
        self.entries = {k: v for k, v in entries.items() if v}

    def get(self, i, j):
        return self.entries.get((i, j), 0)

    def total(self, i):
        return sum(v for (ii, _), v in self.entries.items() if ii == i)

    def max_index(self):
        return max((i for (i, _) in self.entries), default=0)

    def items(self):
        return sorted(self.entries.items())

    def regularity(self):
        return max((_scalar(j) - i for (i, j) in self.entries), default=0)

    def __eq__(self, other):
        return isinstance(other, BettiTable) and self.entries == other.entries

    def __repr__(self):
        return "BettiTable(%s)" % self.entries


def _scalar(j):
    return j[0] if isinstance(j, tuple) else j


def betti_table(I):
    """beta_{i,j}(R/I) from a minimal graded free resolution."""
    if not I.is_homogeneous():
        raise ValueError("Betti tables need a homogeneous ideal")
    ring = I.ring
    res = minimal_resolution_of_quotient(I)
    if res.length + 1 > ring.nvars + 1 and res.module(res.length).rank:
        raise AssertionError("resolution exceeds the Hilbert syzygy bound")
    entries = {}
    for i, mod in enumerate(res.modules):
        for s in mod.shifts:
            j = s[0] if len(s) == 1 else s
            entries[(i, j)] = entries.get((i, j), 0) + 1
    return BettiTable(ring, entries)


# ---------------------------------------------------------------------------
# Hilbert functions via standard monomial counting


_count_cache = {}


def count_monomials(ring, degree):
    """Number of monomials of the given multidegree."""
    if isinstance(degree, int):
        degree = (degree,)
    degree = tuple(degree)
    if len(degree) != ring.grading_rank:
        raise ValueError("degree of wrong grading rank")
    key = (ring.key(),)
    memo = _count_cache.setdefault(key, {})
    degs = ring.degrees
    n = ring.nvars

    def rec(i, rem):
        if any(x < 0 for x in rem):
            return 0
        if i == n:
            return 1 if all(x == 0 for x in rem) else 0
        hit = memo.get((i, rem))
        if hit is not None:
            return hit
        d = degs[i]
        total = 0
        k = 0
        cur = rem
        while all(x >= 0 for x in cur):
            total += rec(i + 1, cur)
            k += 1
            cur = tuple(x - y for x, y in zip(rem, tuple(v * k for v in d)))
            if all(v == 0 for v in d):
                break
        memo[(i, rem)] = total
        return total

    return rec(0, degree)


_numer_cache = {}


def _minimalize_monomials(gens):
    gens = sorted(set(gens), key=lambda e: (sum(e), e))
    out = []
    for e in gens:
        if not any(mono_divides(m, e) for m in out):
            out.append(e)
    return tuple(out)


def _shift_numer(numer, d):
    return {tuple(a + b for a, b in zip(k, d)): v for k, v in numer.items()}


def _add_numer(a, b):
    out = dict(a)
    for k, v in b.items():
        nv = out.get(k, 0) + v
        if nv:
            out[k] = nv
        elif k in out:
            del out[k]
    return out


def _mul_numer(a, b):
    out = {}
    for k1, v1 in a.items():
        for k2, v2 in b.items():
            k = tuple(x + y for x, y in zip(k1, k2))
            nv = out.get(k, 0) + v1 * v2
            if nv:
                out[k] = nv
            elif k in out:
                del out[k]
    return out


def hilbert_numerator(ring, gens):
    """Numerator of the Hilbert series of R/(gens) over prod(1 - s^deg x_i).

    gens are exponent tuples of monomials; the numerator is returned as a
    dict from multidegree to integer coefficient.
    """
    gens = _minimalize_monomials(gens)
    key = (ring.key(), gens)
    hit = _numer_cache.get(key)
    if hit is not None:
        return hit
    zero = ring.zero_degree
    if not gens:
        out = {zero: 1}
    elif any(all(x == 0 for x in e) for e in gens):
        out = {}
    else:
        supports = [frozenset(i for i, x in enumerate(e) if x) for e in gens]
        occurrences = {}
        for s in supports:
            for i in s:
                occurrences[i] = occurrences.get(i, 0) + 1
        pivot = max(occurrences, key=lambda i: (occurrences[i], -i))
        if occurrences[pivot] <= 1:
            out = {zero: 1}
            for e in gens:
                out = _mul_numer(
                    out, {zero: 1, ring.monomial_degree(e): -1}
                )
        else:
            ex = tuple(1 if i == pivot else 0 for i in range(ring.nvars))
            plus = _minimalize_monomials(
                [ex] + [e for e in gens if e[pivot] == 0]
            )
            colon = _minimalize_monomials(
                tuple(x - 1 if i == pivot and x > 0 else x for i, x in enumerate(e))
                for e in gens
            )
            n_plus = hilbert_numerator(ring, plus)
            n_colon = hilbert_numerator(ring, colon)
            out = _add_numer(
                n_plus, _shift_numer(n_colon, ring.monomial_degree(ex))
            )
    _numer_cache[key] = out
    return out


def quotient_hf(ring, gens, degree):
    """dim_K of (R/monomial ideal) in one multidegree."""
    if isinstance(degree, int):
        degree = (degree,)
    numer = hilbert_numerator(ring, tuple(gens))
    return sum(
        c * count_monomials(ring, tuple(a - b for a, b in zip(degree, k)))
        for k, c in numer.items()
    )


def submodule_hf(ring, lead_terms, shifts, degree):
    """dim_K of a monomial submodule of a shifted free module in one degree.

    lead_terms: iterable of (position, exponent tuple).
    """
    if isinstance(degree, int):
        degree = (degree,)
    by_pos = {}
    for (pos, e) in lead_terms:
        by_pos.setdefault(pos, []).append(e)
    total = 0
    for pos, gens in by_pos.items():
        d = tuple(a - b for a, b in zip(degree, shifts[pos]))
        total += count_monomials(ring, d) - quotient_hf(ring, gens, d)
    return total


def free_module_hf(module, degree):
    if isinstance(degree, int):
        degree = (degree,)
    return sum(
        count_monomials(module.ring, tuple(a - b for a, b in zip(degree, s)))
        for s in module.shifts
    )


def hilbert_function(obj, degree):
    """Graded dimension of R/I, of a free module, or of a subquotient U/V."""
    from .groebner import Ideal
    from .exthomology import SubquotientModule

    if isinstance(obj, Ideal):
        ring = obj.ring
        order = PositionOverTerm(GrevLex())
        gb = module_buchberger(
            [{(0, e): c for e, c in g.coeffs.items()} for g in obj.gens], order, ring
        )
        leads = [max(v, key=lambda t: order.key(*t))[1] for v in gb]
        return quotient_hf(ring, leads, degree)
    if isinstance(obj, FreeModule):
        return free_module_hf(obj, degree)
    if isinstance(obj, SubquotientModule):
        return obj.hf(degree)
    raise TypeError("cannot take the Hilbert function of %r" % (obj,))


def module_dimension(I):
    """Krull dimension of R/I via any initial ideal."""
    from .groebner import initial_ideal

    ring = I.ring
    n = ring.nvars
    if not I.gens:
        return n
    J = I if I.is_monomial() else initial_ideal(I, GrevLex())
    supports = []
    for g in J.gens:
        e = next(iter(g.coeffs))
        supports.append(frozenset(i for i, x in enumerate(e) if x))
    if any(not s for s in supports):
        return -1  # unit ideal
    best = 0
    for mask in range(1 << n):
        size = bin(mask).count("1")
        if size <= best:
            continue
        subset = {i for i in range(n) if mask >> i & 1}
        if all(not s <= subset for s in supports):
            best = size
    return best


def hilbert_polynomial_values(I, degrees):
    """Values of the Hilbert polynomial of R/I at the given degrees.

    The polynomial is interpolated from the Hilbert function on the window
    [reg+1, reg+dim+2], where reg comes from the minimal resolution.
    """
    from fractions import Fraction

    dim = module_dimension(I)
    if dim <= 0:
        return {d: 0 for d in degrees}
    reg = betti_table(I).regularity()
    pts = list(range(reg + 1, reg + dim + 2))
    vals = [hilbert_function(I, d) for d in pts]

    def lagrange(x):
        total = Fraction(0)
        for k, (xk, yk) in enumerate(zip(pts, vals)):
            term = Fraction(yk)
            for l, xl in enumerate(pts):
                if l != k:
                    term *= Fraction(x - xl, xk - xl)
            total += term
        return total

    out = {}
    for d in degrees:
        v = lagrange(d)
        if v.denominator != 1:
            raise AssertionError("Hilbert polynomial fit is not integral at %d" % d)
        out[d] = int(v)
    return out
