"""Degeneration workflows over P = R[t].

build_setup assembles the flat family S = P/hom_w(I) with its bigrading and
asserts the structural identities relating hom_w(I) and in_w(I). On top of
that sit the two fiber-fullness checkers (flatness of Ext over K[t], and the
definitional injectivity probe on a finite window of powers m), the local
cohomology and Betti comparisons between R/I and R/in_w(I), and the
square-free sufficient-condition pipeline for the truncated initial ideal.
"""

from __future__ import annotations

import time

from .polyring import GrevLex, Polynomial, dehomogenize, mono_mul
from .groebner import (
    Ideal,
    buchberger,
    ideal_equal,
    ideal_quotient,
    initial_ideal,
    initial_ideal_w,
    homogenize_ideal,
    normal_form,
    realize_weight,
)
from .modules import (
    FreeModule,
    LiftSolver,
    ModuleMatrix,
    module_syzygies,
    vec_mul_term,
)
from .resolutions import minimal_resolution_of_quotient, betti_table
from .exthomology import (
    GradedDims,
    KtDecomposition,
    SubquotientModule,
    ext_data,
    kt_cohomology_presentation,
    kt_decompose,
    kt_dual_complex,
    kernel_basis_kt,
    local_cohomology_dims,
    mat_mul,
    solve_kt,
    u_from_poly_t,
)


class DegenerationSetup:
    """The bundle (R, I, w, P, hom_w(I), in_w(I), h) driving all checks."""

    def __init__(self, R, I, order, w, P, homI, inI, h):
        self.R = R
        self.I = I
        self.order = order
        self.w = tuple(w)
        self.P = P
        self.homI = homI
        self.inI = inI
        self.h = h

    @property
    def n(self):
        return self.R.nvars

    def t_poly(self):
        return self.P.var(self.P.nvars - 1)

    def lift_to_P(self, I):
        """Image of an ideal of R in P (append t-exponent 0)."""
        gens = [
            Polynomial(self.P, {e + (0,): c for e, c in g.coeffs.items()})
            for g in I.gens
        ]
        return Ideal(self.P, gens)

    def __repr__(self):
        return "DegenerationSetup(w=%s, h=%d, homI gens=%d)" % (
            list(self.w), self.h, len(self.homI.gens),
        )


def build_setup(R, I, order_or_w, h=None):
    """Build the degeneration and assert its construction invariants."""
    if not I.is_homogeneous():
        raise ValueError("the ideal must be homogeneous for the ring grading")
    if h is None:
        h = R.nvars + 1
    if isinstance(order_or_w, (tuple, list)):
        order = None
        w = tuple(int(x) for x in order_or_w)
        inI = initial_ideal_w(I, w)
    else:
        order = order_or_w
        G = buchberger(I, order)
        w = realize_weight(G)
        inI = initial_ideal(I, order)
    homI = homogenize_ideal(I, w)
    P = homI.ring
    setup = DegenerationSetup(R, I, order, w, P, homI, inI, h)
    t = setup.t_poly()
    lifted_in = setup.lift_to_P(inI)
    if not ideal_equal(
        Ideal(P, homI.gens + (t,)), Ideal(P, lifted_in.gens + (t,))
    ):
        raise AssertionError("(hom_w(I), t) != (in_w(I), t)")
    if not ideal_equal(ideal_quotient(homI, t), homI):
        raise AssertionError("hom_w(I) is not saturated with respect to t")
    dehom = Ideal(R, [dehomogenize(g, R) for g in homI.gens])
    if not ideal_equal(dehom, I):
        raise AssertionError("dehomogenization does not recover I")
    return setup


# ---------------------------------------------------------------------------
# flatness of Ext^i_P(S, N) over K[t]


def check_flat_ext(setup, N):
    """Per-i flatness verdicts of Ext^i_P(S, N) over K[t], for i <= h-1.

    N is "P" (t-torsion test on dualized resolutions) or "Kt" (torsion of the
    Smith normal form of the specialized dual complex).
    """
    from .exthomology import t_torsion_is_zero

    h = setup.h
    verdicts = {}
    if N == "P":
        data = ext_data(setup.homI, cap=h)
        for i in range(h):
            sub = data.subquotient(i)
            verdicts[i] = t_torsion_is_zero(sub)
    elif N == "Kt":
        res = minimal_resolution_of_quotient(setup.homI, h)
        cplx = kt_dual_complex(res)
        for i in range(h):
            verdicts[i] = kt_decompose(cplx, i).is_flat()
    else:
        raise ValueError("N must be 'P' or 'Kt'")
    return verdicts


def kt_ext_table(setup, depth=None):
    """Bigraded normal forms of Ext^i_P(S, K[t]): {i: {j: KtDecomposition}}."""
    h = depth if depth is not None else setup.h
    res = minimal_resolution_of_quotient(setup.homI, h)
    cplx = kt_dual_complex(res)
    out = {}
    for i in range(h):
        per_j = {}
        for j in cplx.strand_degrees():
            dec = kt_decompose(cplx.component(j), i)
            if dec.free_rank or dec.torsion:
                per_j[j] = dec
        out[i] = per_j
    return out


# ---------------------------------------------------------------------------
# definitional fiber-fullness probe


def _quotient_plus_power(setup, m):
    """The P-ideal (hom_w(I), t^m)."""
    t = setup.t_poly()
    return Ideal(setup.P, setup.homI.gens + (t**m,))


def _chain_map(resF, resG, depth):
    """Chain map F_. -> G_. over the projection of the presented quotients.

    Both resolutions start at F_0 = G_0 = P; the map is the identity there
    and is lifted degreewise through the differentials of G.
    """
    P = resF.ring
    psi = []
    id0 = ModuleMatrix(
        resF.module(0), resG.module(0), [resG.module(0).basis_vector(0)]
    )
    psi.append(id0)
    for k in range(1, depth + 1):
        if k > resF.length:
            break
        dF = resF.differential(k)
        dG = resG.differential(k)
        if k > resG.length:
            raise AssertionError("target resolution too short for the chain map")
        solver = LiftSolver(list(dG.columns), dG.target.rank, P)
        cols = []
        for c in range(dF.source.rank):
            v = psi[k - 1].apply(dF.columns[c])
            if not v:
                cols.append({})
                continue
            x = solver.lift(v)
            if x is None:
                raise AssertionError("chain map lift failed; resolution not exact")
            cols.append(x)
        psi.append(ModuleMatrix(dF.source, dG.source, cols))
    return psi


def _psi_dual_apply(psi_k, vec):
    """Apply Hom(psi_k, P): Hom(G_k, P) -> Hom(F_k, P) to a vector."""
    return psi_k.dual_map().apply(vec)


def _ext_map_kernel_zero_P(resG, resF, psi, i):
    """Kernel-zero test for Ext^i(S/tS, P) -> Ext^i(S/t^mS, P)."""
    P = resG.ring
    if i > resG.length:
        return True
    if i == resG.length and not resG.complete:
        raise ValueError("resolution of S/tS too short")
    ambG = resG.module(i).dual()
    if i == resG.length:
        K = [ambG.basis_vector(p) for p in range(ambG.rank)]
    else:
        dualG_next = resG.differential(i + 1).dual_map()
        K = module_syzygies(list(dualG_next.columns), dualG_next.target.rank, P)
    if not K:
        return True
    imG = list(resG.differential(i).dual_map().columns) if i >= 1 else []
    if i <= resF.length:
        imF = list(resF.differential(i).dual_map().columns) if i >= 1 else []
        rankF = resF.module(i).rank
        psiT = psi[i].dual_map() if i < len(psi) else None
    else:
        imF = []
        rankF = 0
        psiT = None
    mapped = []
    for kvec in K:
        mapped.append(psiT.apply(kvec) if psiT is not None else {})
    cols = mapped + imF
    syz = module_syzygies(cols, rankF, P)
    memb = LiftSolver(imG, ambG.rank, P) if imG else None
    a = len(K)
    for s in syz:
        u = {}
        for (pos, e), c in s.items():
            if pos >= a:
                continue
            for (p2, e2), c2 in K[pos].items():
                kk = (p2, mono_mul(e2, e))
                nc = u.get(kk)
                nc = c * c2 if nc is None else nc + c * c2
                if nc:
                    u[kk] = nc
                elif kk in u:
                    del u[kk]
        if not u:
            continue
        if memb is None:
            return False
        if not memb.contains(u):
            return False
    return True


def _specialized_psi_matrix(psi_k, nv, field):
    """Matrix of Hom(psi_k, K[t]): rows F_k basis, columns G_k basis."""
    nF = psi_k.source.rank
    nG = psi_k.target.rank
    M = [[() for _ in range(nG)] for _ in range(nF)]
    for c in range(nF):
        col = psi_k.columns[c]
        for (pos, e), coeff in col.items():
            if any(e[v] for v in range(nv - 1)):
                continue
            cur = list(M[c][pos])
            while len(cur) <= e[-1]:
                cur.append(field.zero)
            cur[e[-1]] = cur[e[-1]] + coeff
            M[c][pos] = tuple(cur)
    return M


def _ext_map_kernel_zero_Kt(cplxG, cplxF, psi, i, nv, field):
    """Kernel-zero test for Ext^i(S/tS, K[t]) -> Ext^i(S/t^mS, K[t])."""
    BG, XG = kt_cohomology_presentation(cplxG, i)
    if BG is None:
        return True
    kG = len(BG[0]) if BG else 0
    if kG == 0:
        return True
    BF, XF = kt_cohomology_presentation(cplxF, i)
    kF = len(BF[0]) if BF and BF[0] is not None else 0 if BF is not None else 0
    if BF is None or kF == 0:
        # Ext^i on the F side vanishes: injectivity means coker(XG) = 0.
        for l in range(kG):
            e = [(field.one,) if r == l else () for r in range(kG)]
            if solve_kt(XG, e, field) is None:
                return False
        return True
    if i < len(psi):
        Psi = _specialized_psi_matrix(psi[i], nv, field)
    else:
        Psi = [[() for _ in range(cplxG.rank(i))] for _ in range(cplxF.rank(i))]
    PsiB = mat_mul(Psi, BG, field)
    Y = []
    for c in range(kG):
        col = [PsiB[r][c] for r in range(len(PsiB))]
        y = solve_kt(BF, col, field)
        if y is None:
            raise AssertionError("chain map does not send cocycles to cocycles")
        Y.append(y)
    Ymat = [[Y[c][r] for c in range(kG)] for r in range(kF)]
    mF = len(XF[0]) if XF and XF[0] else 0
    stacked = [Ymat[r] + (XF[r] if mF else []) for r in range(kF)]
    Kb = kernel_basis_kt(stacked, field, ncols=kG + mF)
    ncols = len(Kb[0]) if Kb else 0
    for c in range(ncols):
        vec = [Kb[r][c] for r in range(kG)]
        if all(not x for x in vec):
            continue
        if solve_kt(XG, vec, field) is None:
            return False
    return True


def check_fiberfull_definition(setup, N, m_window=(2, 3, 4)):
    """Injectivity of Ext^i(S/tS, N) -> Ext^i(S/t^mS, N) for i <= h, m in window.

    A finite-m probe of the definition: failures certify non-fiber-fullness,
    while successes on the window prove nothing by themselves.
    """
    if any(m < 2 for m in m_window):
        raise ValueError("the m window must contain integers >= 2")
    h = setup.h
    P = setup.P
    depth = h + 1
    IG = _quotient_plus_power(setup, 1)
    resG = minimal_resolution_of_quotient(IG, depth)
    verdicts = {}
    for m in sorted(m_window):
        IF = _quotient_plus_power(setup, m)
        resF = minimal_resolution_of_quotient(IF, depth)
        psi = _chain_map(resF, resG, depth)
        if N == "Kt":
            nv = P.nvars
            cplxG = kt_dual_complex(resG)
            cplxF = kt_dual_complex(resF)
            for i in range(h + 1):
                verdicts[(i, m)] = _ext_map_kernel_zero_Kt(
                    cplxG, cplxF, psi, i, nv, P.field
                )
        elif N == "P":
            for i in range(h + 1):
                verdicts[(i, m)] = _ext_map_kernel_zero_P(resG, resF, psi, i)
        else:
            raise ValueError("N must be 'P' or 'Kt'")
    return verdicts


class FiberFullReport:
    """Verdict bundle for the flatness and definitional checks.

    Enforces the implication "flat for all i <= h-1 => injective for all
    tested (i, m)" and its contrapositive as hard assertions.
    """

    def __init__(self, setup, N, flatness, injectivity, m_window, tables=None):
        self.setup = setup
        self.N = N
        self.flatness = dict(flatness)
        self.injectivity = dict(injectivity)
        self.m_window = tuple(m_window)
        self.tables = tables
        self.fiber_full = all(self.flatness.values())
        if self.fiber_full and self.injectivity:
            if not all(self.injectivity.values()):
                raise AssertionError(
                    "flatness certified fiber-fullness but an injectivity probe failed"
                )
        if self.injectivity and not all(self.injectivity.values()):
            if all(self.flatness.values()):
                raise AssertionError(
                    "observed injectivity failure without a non-flat Ext"
                )

    def failures(self):
        return sorted(k for k, v in self.injectivity.items() if not v)

    def nonflat(self):
        return sorted(i for i, v in self.flatness.items() if not v)

    def __repr__(self):
        return "FiberFullReport(N=%s, flat=%s, failures=%s)" % (
            self.N, self.flatness, self.failures(),
        )


def fiberfull_check(setup, N, definition=False, m_window=(2, 3, 4)):
    flat = check_flat_ext(setup, N)
    inj = check_fiberfull_definition(setup, N, m_window) if definition else {}
    tables = kt_ext_table(setup) if N == "Kt" else None
    return FiberFullReport(setup, N, flat, inj, m_window if definition else (), tables)


# ---------------------------------------------------------------------------
# comparisons between R/I and R/in(I)


class ComparisonReport:
    def __init__(self, kind, left_label, right_label, rows, verdict, agree):
        self.kind = kind
        self.left_label = left_label
        self.right_label = right_label
        self.rows = rows
        self.verdict = verdict
        self.agree = agree

    def __repr__(self):
        return "ComparisonReport(%s, agree=%s)" % (self.kind, self.agree)


def compare_local_cohomology(R, I, order, i_range=None, j_window=None):
    """Side-by-side graded local cohomology of R/I and R/in(I)."""
    if not I.is_homogeneous():
        raise ValueError("the ideal must be homogeneous")
    n = R.nvars
    inI = initial_ideal(I, order) if not isinstance(order, (tuple, list)) else initial_ideal_w(I, order)
    if i_range is None:
        i_range = range(0, n + 1)
    if j_window is None:
        reg = betti_table(I).regularity()
        j_window = range(-(n + 1), reg + 2)
    i_range = [i for i in i_range if 0 <= i <= n]
    j_window = tuple(j_window)
    rows = {}
    equal_is = []
    for i in i_range:
        left = local_cohomology_dims(I, i, j_window)
        right = local_cohomology_dims(inI, i, j_window)
        rows[i] = (left, right)
        if left == right:
            equal_is.append(i)
    agree = len(equal_is) == len(i_range)
    return ComparisonReport(
        "localcoh", "R/I", "R/in(I)", rows, {"equal_at": equal_is}, agree
    ), inI


def compare_betti(R, I, order):
    """Side-by-side Betti tables of R/I and R/in(I) with disagreement list."""
    if not I.is_homogeneous():
        raise ValueError("the ideal must be homogeneous")
    inI = initial_ideal(I, order) if not isinstance(order, (tuple, list)) else initial_ideal_w(I, order)
    left = betti_table(I)
    right = betti_table(inI)
    keys = sorted(set(left.entries) | set(right.entries))
    disagreements = [
        (i, j, left.get(i, j), right.get(i, j))
        for (i, j) in keys
        if left.get(i, j) != right.get(i, j)
    ]
    return ComparisonReport(
        "betti", "R/I", "R/in(I)",
        {"left": left, "right": right},
        {"disagreements": disagreements},
        not disagreements,
    ), inI


# ---------------------------------------------------------------------------
# the square-free sufficient-condition pipeline


class PipelineReport:
    def __init__(self, condition, truncation, comparison, i_range, runtimes_ms):
        self.condition = condition
        self.truncation = truncation
        self.comparison = comparison
        self.i_range = i_range
        self.runtimes_ms = runtimes_ms

    @property
    def verified(self):
        return self.comparison is not None and self.comparison.agree

    def __repr__(self):
        return "PipelineReport(condition=%s, verified=%s)" % (
            self.condition, self.verified,
        )


def theorem35_pipeline(R, I, order, h, j_window=None):
    """Truncate in(I) to height <= h, test square-freeness, verify equalities.

    If in(I)^{<=h} is square-free, the local cohomology dimensions of R/I and
    R/in(I) must agree for all i > n-h; the pipeline verifies them on a degree
    window and reports the condition status either way ("unknown" when the
    truncation is not square-free, since square-freeness is only sufficient).
    """
    from .monomial import MonomialIdeal, is_squarefree, truncate_components

    runtimes = {}
    t0 = time.time()
    inI = initial_ideal(I, order) if not isinstance(order, (tuple, list)) else initial_ideal_w(I, order)
    runtimes["initial_ideal"] = int((time.time() - t0) * 1000)
    if not inI.is_monomial():
        return PipelineReport("untestable", None, None, [], runtimes)
    n = R.nvars
    t0 = time.time()
    M = MonomialIdeal.from_ideal(inI)
    trunc = truncate_components(M, h) if M.is_proper() and not M.is_zero() else M
    condition = "holds" if is_squarefree(trunc) else "unknown"
    runtimes["truncation"] = int((time.time() - t0) * 1000)
    i_range = [i for i in range(max(n - h + 1, 0), n + 1)]
    comparison = None
    if condition == "holds":
        t0 = time.time()
        comparison, _ = compare_local_cohomology(R, I, order, i_range, j_window)
        runtimes["comparison"] = int((time.time() - t0) * 1000)
        if not comparison.agree:
            raise AssertionError(
                "square-free truncation but local cohomology differs on the window"
            )
    return PipelineReport(condition, trunc, comparison, i_range, runtimes)


# ---------------------------------------------------------------------------
# structural invariant from the short exact sequences of powers of t


def multiplication_injective(setup, k, l):
    """Kernel of S/t^k S --t^(l-k)--> S/t^l S is zero (k <= l)."""
    if not (1 <= k <= l):
        raise ValueError("need 1 <= k <= l")
    t = setup.t_poly()
    Il = _quotient_plus_power(setup, l)
    Ik = _quotient_plus_power(setup, k)
    colon = ideal_quotient(Il, t ** (l - k))
    G = buchberger(Ik, GrevLex())
    return all(normal_form(g, G).is_zero() for g in colon.gens)
