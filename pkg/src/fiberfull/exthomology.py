"""Graded Ext dimensions, local cohomology via duality, and K[t]-module tools.

Ext modules of R/I into free twists are realized as subquotients ker/im of the
dualized minimal free resolution; their graded dimensions come from standard
monomial counts. Local cohomology dimensions follow by graded local duality
with twist R(-|g|). Over P = R[t], flatness over K[t] is tested as vanishing
of t-torsion; with coefficients specialized to K[t] the dual complex is a
complex of free K[t]-modules handled by Smith normal form over that PID.
"""

from __future__ import annotations

from .polyring import GrevLex, Polynomial
from .modules import (
    FreeModule,
    PositionOverTerm,
    PreparedBasis,
    module_buchberger,
    module_reduce,
    module_syzygies,
    vec_lead,
    vec_mul_term,
)


class GradedDims:
    """Graded dimensions on an explicit degree window."""

    def __init__(self, dims, window):
        self.window = tuple(window)
        self.dims = {j: int(dims.get(j, 0)) for j in self.window}

    def at(self, j):
        if j not in self.dims:
            raise KeyError("degree %r outside computed window" % (j,))
        return self.dims[j]

    def items(self):
        return sorted(self.dims.items())

    def nonzero(self):
        return {j: d for j, d in self.dims.items() if d}

    def __eq__(self, other):
        return (
            isinstance(other, GradedDims)
            and self.window == other.window
            and self.dims == other.dims
        )

    def __repr__(self):
        return "GradedDims(%s)" % (self.nonzero(),)


class KtDecomposition:
    """Finitely generated graded K[t]-module shape: free rank and torsion."""

    def __init__(self, free_rank, torsion):
        if free_rank < 0 or any(k < 1 for k in torsion):
            raise ValueError("invalid decomposition data")
        self.free_rank = int(free_rank)
        self.torsion = tuple(sorted(torsion))

    def is_flat(self):
        return not self.torsion

    def __eq__(self, other):
        return (
            isinstance(other, KtDecomposition)
            and self.free_rank == other.free_rank
            and self.torsion == other.torsion
        )

    def __repr__(self):
        return "KtDecomposition(free=%d, torsion=%s)" % (self.free_rank, list(self.torsion))


class SubquotientModule:
    """Graded module U/V inside a free module, U and V given by generators."""

    def __init__(self, ambient, U, V, check=True):
        self.ambient = ambient
        self.U = [dict(u) for u in U if u]
        self.V = [dict(v) for v in V if v]
        self._order = PositionOverTerm(GrevLex())
        self._gbU = None
        self._gbV = None
        if check:
            gbU = self._basisU()
            for v in self.V:
                rem, _ = module_reduce(dict(v), gbU)
                if rem:
                    raise ValueError("V is not contained in U")

    def _basisU(self):
        if self._gbU is None:
            gb = module_buchberger(self.U, self._order, self.ambient.ring)
            self._gbU = PreparedBasis(gb, self._order)
        return self._gbU

    def _basisV(self):
        if self._gbV is None:
            gb = module_buchberger(self.V, self._order, self.ambient.ring)
            self._gbV = PreparedBasis(gb, self._order)
        return self._gbV

    def _leads(self, prepared):
        return [(e.lead_pos, e.lead_exps) for e in prepared.entries]

    def hf(self, degree):
        from .resolutions import submodule_hf

        ring = self.ambient.ring
        if isinstance(degree, int):
            degree = (degree,)
        u = submodule_hf(ring, self._leads(self._basisU()), self.ambient.shifts, degree)
        v = submodule_hf(ring, self._leads(self._basisV()), self.ambient.shifts, degree)
        return u - v

    def contains_in_V(self, vec):
        rem, _ = module_reduce(dict(vec), self._basisV())
        return not rem

    def is_zero_module(self):
        gbU = self._basisU()
        gbV = self._basisV()
        for e in gbU.entries:
            rem, _ = module_reduce(dict(e.vec), gbV)
            if rem:
                return False
        return True


# ---------------------------------------------------------------------------
# Ext of R/I into free twists, and local cohomology by graded duality


class _ExtData:
    """Cached dualized-resolution subquotients for one quotient ring R/I."""

    def __init__(self, I, cap=None):
        from .resolutions import minimal_resolution_of_quotient

        self.I = I
        self.ring = I.ring
        self.res = minimal_resolution_of_quotient(I, cap)
        self._sub = {}

    def subquotient(self, i):
        if i in self._sub:
            return self._sub[i]
        res = self.res
        ring = self.ring
        if i < 0 or i > res.length:
            ambient = FreeModule(ring, 0)
            sub = SubquotientModule(ambient, [], [], check=False)
        else:
            if i == res.length and not res.complete:
                raise ValueError("resolution too short for Ext^%d" % i)
            ambient = res.module(i).dual()
            dual_next = res.differential(i + 1).dual_map()
            dual_this = res.differential(i).dual_map()
            if i == res.length:
                U = [ambient.basis_vector(p) for p in range(ambient.rank)]
            else:
                U = module_syzygies(list(dual_next.columns), dual_next.target.rank, ring)
            V = list(dual_this.columns) if i >= 1 else []
            sub = SubquotientModule(ambient, U, V, check=False)
        self._sub[i] = sub
        return sub


_ext_cache = {}


def ext_data(I, cap=None):
    key = (I.key(), cap)
    data = _ext_cache.get(key)
    if data is None:
        data = _ExtData(I, cap)
        _ext_cache[key] = data
    return data


def ext_dims(I, N, i, window):
    """Graded dimensions of Ext^i_R(R/I, N) on a degree window.

    N is an integer s for the free twist R(-s), or the string "K" for the
    residue field (in which case dim Ext^i(R/I, K)_j = beta_{i,-j}).
    """
    if window is None:
        raise ValueError("a degree window is required")
    if i < 0:
        raise ValueError("i must be >= 0")
    if not I.is_homogeneous():
        raise ValueError("Ext dimensions need a homogeneous ideal")
    window = tuple(window)
    data = ext_data(I)
    if N == "K":
        dims = {}
        if i <= data.res.length:
            for s in data.res.module(i).shifts:
                j = -s[0]
                dims[j] = dims.get(j, 0) + 1
        return GradedDims(dims, window)
    s = int(N)
    sub = data.subquotient(i)
    dims = {}
    for j in window:
        dims[j] = sub.hf(j - s) if sub.ambient.rank else 0
    return GradedDims(dims, window)


def local_cohomology_dims(I, i, window):
    """dim_K H^i_m(R/I)_j via dim Ext^{n-i}(R/I, R(-|g|))_{-j}."""
    ring = I.ring
    n = ring.nvars
    if not (0 <= i <= n):
        raise ValueError("cohomological index out of range")
    window = tuple(window)
    gsum = sum(d[0] for d in ring.degrees)
    data = ext_data(I)
    sub = data.subquotient(n - i)
    dims = {}
    for j in window:
        dims[j] = sub.hf(-j - gsum) if sub.ambient.rank else 0
    return GradedDims(dims, window)


def t_torsion_is_zero(E):
    """True iff the subquotient U/V over P = R[t] has no t-torsion.

    Uses a single colon by t: elements u of U with t*u in V are computed from
    syzygies of [t*U | V] and tested for membership in V.
    """
    ring = E.ambient.ring
    if not E.U:
        return True
    et = tuple(0 if k < ring.nvars - 1 else 1 for k in range(ring.nvars))
    one = ring.field.one
    cols = [vec_mul_term(u, et, one) for u in E.U] + list(E.V)
    syz = module_syzygies(cols, E.ambient.rank, ring)
    a = len(E.U)
    for s in syz:
        u = {}
        for (pos, e), c in s.items():
            if pos >= a:
                continue
            for (p2, e2), c2 in E.U[pos].items():
                from .polyring import mono_mul

                k = (p2, mono_mul(e2, e))
                nc = u.get(k)
                nc = c * c2 if nc is None else nc + c * c2
                if nc:
                    u[k] = nc
                elif k in u:
                    del u[k]
        if not u:
            continue
        if E.V:
            if not E.contains_in_V(u):
                return False
        else:
            return False
    return True


# ---------------------------------------------------------------------------
# univariate polynomials over the coefficient field (dense tuples)


def u_trim(c):
    c = list(c)
    while c and not c[-1]:
        c.pop()
    return tuple(c)


def u_is_zero(c):
    return not c


def u_deg(c):
    return len(c) - 1


def u_add(a, b, field):
    n = max(len(a), len(b))
    z = field.zero
    return u_trim(
        tuple((a[i] if i < len(a) else z) + (b[i] if i < len(b) else z) for i in range(n))
    )


def u_neg(a):
    return tuple(-x for x in a)


def u_sub(a, b, field):
    return u_add(a, u_neg(b), field)


def u_mul(a, b, field):
    if not a or not b:
        return ()
    z = field.zero
    out = [z] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if not x:
            continue
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return u_trim(out)


def u_scale(a, c):
    if not c:
        return ()
    return tuple(x * c for x in a)


def u_divmod(a, b, field):
    if not b:
        raise ZeroDivisionError("univariate division by zero")
    q = [field.zero] * max(len(a) - len(b) + 1, 0)
    r = list(a)
    db = len(b) - 1
    lb = b[-1]
    while len(r) - 1 >= db and r:
        c = r[-1] / lb
        k = len(r) - 1 - db
        q[k] = q[k] + c
        for i, y in enumerate(b):
            r[k + i] = r[k + i] - c * y
        while r and not r[-1]:
            r.pop()
    return u_trim(q), u_trim(r)


def u_valuation(a):
    for i, x in enumerate(a):
        if x:
            return i
    return -1


def u_is_monomial(a):
    return sum(1 for x in a if x) == 1


def u_from_poly_t(f):
    """Coefficient tuple of a polynomial supported on the last variable only."""
    out = {}
    for e, c in f.coeffs.items():
        if any(x for x in e[:-1]):
            raise ValueError("polynomial is not in K[t]")
        out[e[-1]] = c
    if not out:
        return ()
    z = f.ring.field.zero
    return u_trim(tuple(out.get(k, z) for k in range(max(out) + 1)))


# ---------------------------------------------------------------------------
# matrices over K[t]: Smith normal form, kernels, membership


def _identity(n, field):
    one, zero = (field.one,), ()
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def mat_mul(A, B, field):
    m, k = len(A), len(B)
    n = len(B[0]) if B else 0
    out = [[() for _ in range(n)] for _ in range(m)]
    for i in range(m):
        for l in range(k):
            a = A[i][l]
            if not a:
                continue
            rowB = B[l]
            for j in range(n):
                if rowB[j]:
                    out[i][j] = u_add(out[i][j], u_mul(a, rowB[j], field), field)
    return out


def smith_normal_form(A, field):
    """(D, U, V) with U*A*V = D diagonal, d_k | d_{k+1}, diagonals monic."""
    m = len(A)
    n = len(A[0]) if m else 0
    D = [list(row) for row in A]
    U = _identity(m, field)
    V = _identity(n, field)

    def row_op(i1, i2, q):  # row i2 -= q * row i1
        for j in range(n):
            D[i2][j] = u_sub(D[i2][j], u_mul(q, D[i1][j], field), field)
        for j in range(m):
            U[i2][j] = u_sub(U[i2][j], u_mul(q, U[i1][j], field), field)

    def col_op(j1, j2, q):  # col j2 -= q * col j1
        for i in range(m):
            D[i][j2] = u_sub(D[i][j2], u_mul(q, D[i][j1], field), field)
        for i in range(n):
            V[i][j2] = u_sub(V[i][j2], u_mul(q, V[i][j1], field), field)

    def swap_rows(i1, i2):
        D[i1], D[i2] = D[i2], D[i1]
        U[i1], U[i2] = U[i2], U[i1]

    def swap_cols(j1, j2):
        for i in range(m):
            D[i][j1], D[i][j2] = D[i][j2], D[i][j1]
        for i in range(n):
            V[i][j1], V[i][j2] = V[i][j2], V[i][j1]

    t = 0
    while True:
        pivot = None
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if D[i][j]:
                    d = u_deg(D[i][j])
                    if best is None or d < best:
                        best = d
                        pivot = (i, j)
        if pivot is None:
            break
        swap_rows(t, pivot[0])
        swap_cols(t, pivot[1])
        while True:
            dirty = False
            for i in range(t + 1, m):
                if D[i][t]:
                    q, r = u_divmod(D[i][t], D[t][t], field)
                    row_op(t, i, q)
                    if r:
                        swap_rows(t, i)
                        dirty = True
            for j in range(t + 1, n):
                if D[t][j]:
                    q, r = u_divmod(D[t][j], D[t][t], field)
                    col_op(t, j, q)
                    if r:
                        swap_cols(t, j)
                        dirty = True
            if not dirty:
                if any(D[i][t] for i in range(t + 1, m)) or any(
                    D[t][j] for j in range(t + 1, n)
                ):
                    continue
                break
        offender = None
        for i in range(t + 1, m):
            for j in range(t + 1, n):
                if D[i][j]:
                    _, r = u_divmod(D[i][j], D[t][t], field)
                    if r:
                        offender = i
                        break
            if offender is not None:
                break
        if offender is not None:
            row_op(offender, t, u_neg((field.one,)))  # row t += row offender
            continue
        t += 1
    for k in range(min(m, n)):
        if D[k][k]:
            lc = D[k][k][-1]
            inv = field.one / lc
            D[k][k] = u_scale(D[k][k], inv)
            for j in range(m):
                U[k][j] = u_scale(U[k][j], inv)
    return D, U, V


def kernel_basis_kt(A, field, ncols=None):
    """Columns spanning ker(A) for a matrix over K[t] (free, saturated)."""
    m = len(A)
    n = len(A[0]) if m else (ncols or 0)
    if m == 0:
        return _identity(n, field)
    D, _, V = smith_normal_form(A, field)
    rank = sum(1 for k in range(min(m, n)) if D[k][k])
    return [[V[i][j] for j in range(rank, n)] for i in range(n)]


def solve_kt(A, b, field):
    """x with A x = b over K[t], or None; A is m x n, b length m."""
    m = len(A)
    n = len(A[0]) if m else 0
    D, U, V = smith_normal_form(A, field)
    ub = [
        _dot_row(U[i], b, field)
        for i in range(m)
    ]
    y = [() for _ in range(n)]
    for i in range(m):
        d = D[i][i] if i < min(m, n) else ()
        if d:
            q, r = u_divmod(ub[i], d, field)
            if r:
                return None
            y[i] = q
        elif ub[i]:
            return None
    return [_dot_row(V[i], y, field) for i in range(n)]


def _dot_row(row, vec, field):
    out = ()
    for a, b in zip(row, vec):
        if a and b:
            out = u_add(out, u_mul(a, b, field), field)
    return out


class KtComplex:
    """Cochain complex of free graded K[t]-modules.

    mats[k] is the matrix of G^k -> G^{k+1} with shape ranks[k+1] x ranks[k];
    first_shifts[k] lists, per basis element of G^k, the first grading
    component (used to split the complex into its bigraded strands).
    """

    def __init__(self, ranks, mats, field, first_shifts=None):
        self.ranks = list(ranks)
        self.mats = mats
        self.field = field
        self.first_shifts = first_shifts

    def matrix(self, k):
        if 0 <= k < len(self.mats):
            return self.mats[k]
        lo = self.ranks[k] if 0 <= k < len(self.ranks) else 0
        hi = self.ranks[k + 1] if 0 <= k + 1 < len(self.ranks) else 0
        return [[() for _ in range(lo)] for _ in range(hi)]

    def rank(self, k):
        if 0 <= k < len(self.ranks):
            return self.ranks[k]
        return 0

    def component(self, j):
        """Subcomplex of basis elements whose first shift equals j."""
        if self.first_shifts is None:
            raise ValueError("complex carries no bigraded shift data")
        idxs = [
            [p for p, s in enumerate(shifts) if s == j] for shifts in self.first_shifts
        ]
        ranks = [len(ix) for ix in idxs]
        mats = []
        for k in range(len(self.mats)):
            M = self.mats[k]
            rows = idxs[k + 1] if k + 1 < len(idxs) else []
            cols = idxs[k]
            sub = [[M[r][c] for c in cols] for r in rows]
            for r in range(self.rank(k + 1)):
                for c in cols:
                    if M[r][c] and r not in rows:
                        raise AssertionError("bigraded strand is not split")
            mats.append(sub)
        return KtComplex(ranks, mats, self.field)

    def strand_degrees(self):
        out = set()
        for shifts in self.first_shifts or []:
            out.update(shifts)
        return sorted(out)


def kt_cohomology_presentation(complex_, position):
    """(B, X): kernel basis B at the position and presentation X of H = coker X.

    B is n_i x k with columns a basis of ker(d^position); X is k x m such
    that the image of d^(position-1), written in kernel coordinates, is the
    column span of X. Returns (None, None) when the cohomology is 0 ambient.
    """
    field = complex_.field
    n_i = complex_.rank(position)
    if n_i == 0:
        return None, None
    Mi = complex_.matrix(position)
    B = kernel_basis_kt(Mi, field, ncols=n_i)
    k = len(B[0]) if B else 0
    if k == 0:
        return B, []
    if position <= 0 or complex_.rank(position - 1) == 0:
        return B, [[] for _ in range(k)]
    C = complex_.matrix(position - 1)
    DB, UB, VB = smith_normal_form(B, field)
    for idx in range(k):
        if u_deg(DB[idx][idx]) != 0:
            raise AssertionError("kernel basis is not saturated")
    UC = mat_mul(UB, C, field)
    for r in range(k, n_i):
        if any(UC[r][c] for c in range(len(UC[0]))):
            raise AssertionError("image does not lie in the kernel")
    top = [UC[r] for r in range(k)]
    X = mat_mul([row[:k] for row in VB], top, field)
    return B, X


def kt_decompose(complex_, position):
    """Cohomology of a K[t]-free complex at one position, in normal form.

    Returns a KtDecomposition: free rank plus the multiset of torsion
    exponents k of the summands K[t]/(t^k).
    """
    field = complex_.field
    B, X = kt_cohomology_presentation(complex_, position)
    if B is None:
        return KtDecomposition(0, ())
    k = len(B[0]) if B else 0
    if k == 0:
        return KtDecomposition(0, ())
    ncols = len(X[0]) if X and X[0] else 0
    if ncols == 0:
        return KtDecomposition(k, ())
    DX, _, _ = smith_normal_form(X, field)
    torsion = []
    rank = 0
    for idx in range(min(len(X), ncols)):
        d = DX[idx][idx]
        if not d:
            continue
        rank += 1
        if u_deg(d) == 0:
            continue
        if not u_is_monomial(d):
            raise AssertionError("graded invariant factor is not a power of t")
        torsion.append(u_deg(d))
    return KtDecomposition(k - rank, torsion)


def kt_dual_complex(res, twist_for="Kt"):
    """Hom_P(F_., K[t]) of a resolution over P = R[t]: set all X_i to 0.

    Entries of the dualized differentials are univariate in t because the
    resolution is bigraded; the bigraded strands are recorded through the
    first components of the (negated) shifts.
    """
    ring = res.ring
    field = ring.field
    nv = ring.nvars
    ranks = [m.rank for m in res.modules]
    first_shifts = [[-s[0] for s in m.shifts] for m in res.modules]
    mats = []
    for k in range(res.length):
        d = res.differential(k + 1)
        rows = d.source.rank
        cols = d.target.rank
        M = [[() for _ in range(cols)] for _ in range(rows)]
        for c, col in enumerate(d.columns):
            for (pos, e), coeff in col.items():
                if any(e[v] for v in range(nv - 1)):
                    continue
                cur = list(M[c][pos])
                while len(cur) <= e[-1]:
                    cur.append(field.zero)
                cur[e[-1]] = cur[e[-1]] + coeff
                M[c][pos] = u_trim(cur)
        mats.append(M)
    return KtComplex(ranks, mats, field, first_shifts)
