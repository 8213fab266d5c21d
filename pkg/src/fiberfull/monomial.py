"""Monomial-ideal algorithms and the simplicial local-cohomology oracle.

Irreducible/primary decomposition by recursive generator splitting, component
truncation by height, saturation by iterated colon with the maximal ideal,
binomial edge ideals of graphs, and local cohomology of square-free monomial
quotients through reduced simplicial homology of links (an independent route,
used to cross-check the duality computation).
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

from .polyring import mono_divides, mono_lcm
from .groebner import Ideal
from .exthomology import GradedDims


class MonomialIdeal:
    """Monomial ideal in canonical form: minimal generators, sorted."""

    def __init__(self, ring, exponents):
        gens = sorted(set(tuple(int(x) for x in e) for e in exponents), key=lambda e: (sum(e), e))
        minimal = []
        for e in gens:
            if not any(mono_divides(m, e) for m in minimal):
                minimal.append(e)
        self.ring = ring
        self.gens = tuple(minimal)

    @classmethod
    def from_ideal(cls, I):
        exps = []
        for g in I.gens:
            if not g.is_monomial():
                raise ValueError("ideal is not monomial")
            exps.append(next(iter(g.coeffs)))
        return cls(I.ring, exps)

    def to_ideal(self):
        return Ideal(self.ring, [self.ring.monomial(e) for e in self.gens])

    def is_zero(self):
        return not self.gens

    def is_unit(self):
        return any(all(x == 0 for x in e) for e in self.gens)

    def is_proper(self):
        return not self.is_unit()

    def contains_monomial(self, e):
        return any(mono_divides(g, e) for g in self.gens)

    def contains(self, other):
        return all(self.contains_monomial(g) for g in other.gens)

    def intersect(self, other):
        if self.is_zero() or other.is_zero():
            return MonomialIdeal(self.ring, ())
        lcms = [mono_lcm(a, b) for a in self.gens for b in other.gens]
        return MonomialIdeal(self.ring, lcms)

    def colon_monomial(self, u):
        """(I : x^u)."""
        return MonomialIdeal(
            self.ring, [tuple(max(g - v, 0) for g, v in zip(e, u)) for e in self.gens]
        )

    def support(self):
        out = set()
        for e in self.gens:
            out.update(i for i, x in enumerate(e) if x)
        return out

    def radical(self):
        return MonomialIdeal(
            self.ring, [tuple(1 if x else 0 for x in e) for e in self.gens]
        )

    def key(self):
        return (self.ring.key(), self.gens)

    def __eq__(self, other):
        return (
            isinstance(other, MonomialIdeal)
            and self.ring == other.ring
            and self.gens == other.gens
        )

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        names = self.ring.names
        def show(e):
            parts = [
                nm if k == 1 else "%s^%d" % (nm, k) for nm, k in zip(names, e) if k
            ]
            return "*".join(parts) if parts else "1"
        return "MonomialIdeal(%s)" % ", ".join(show(e) for e in self.gens)


def is_squarefree(I):
    """True iff every minimal generator has all exponents <= 1."""
    return all(all(x <= 1 for x in e) for e in I.gens)


def _is_irreducible(gens):
    """Irreducible monomial ideals are generated by pure variable powers."""
    return all(sum(1 for x in e if x) == 1 for e in gens)


def _is_primary(gens):
    """Every variable occurring in a generator occurs as a pure power."""
    pure = {next(i for i, x in enumerate(e) if x) for e in gens if sum(1 for x in e if x) == 1}
    occurring = {i for e in gens for i, x in enumerate(e) if x}
    return occurring <= pure


class PrimaryComponent:
    """Monomial primary component tagged with its radical prime."""

    def __init__(self, ideal):
        self.ideal = ideal
        self.prime_support = frozenset(ideal.support())
        self.height = len(self.prime_support)

    def __repr__(self):
        names = self.ideal.ring.names
        prime = ",".join(names[i] for i in sorted(self.prime_support))
        return "PrimaryComponent(%r, prime=(%s))" % (self.ideal, prime)


class PrimaryComponentList:
    def __init__(self, components):
        self.components = tuple(components)

    def associated_primes(self):
        return sorted(c.prime_support for c in self.components)

    def intersection(self):
        if not self.components:
            raise ValueError("empty component list")
        out = self.components[0].ideal
        for c in self.components[1:]:
            out = out.intersect(c.ideal)
        return out

    def __iter__(self):
        return iter(self.components)

    def __len__(self):
        return len(self.components)


def _irreducible_components(I):
    """Irreducible decomposition by splitting mixed generators."""
    ring = I.ring
    stack = [I.gens]
    found = []
    while stack:
        gens = stack.pop()
        split = None
        for e in gens:
            vs = [i for i, x in enumerate(e) if x]
            if len(vs) > 1:
                split = e
                break
        if split is None:
            found.append(MonomialIdeal(ring, gens))
            continue
        v = next(i for i, x in enumerate(split) if x)
        a = tuple(x if i == v else 0 for i, x in enumerate(split))
        b = tuple(0 if i == v else x for i, x in enumerate(split))
        rest = [e for e in gens if e != split]
        stack.append(tuple(rest) + (a,))
        stack.append(tuple(rest) + (b,))
    uniq = {}
    for c in found:
        uniq[c.gens] = c
    comps = list(uniq.values())
    kept = []
    for c in comps:
        if any(d is not c and c.contains(d) and c.gens != d.gens for d in comps):
            continue
        kept.append(c)
    uniq2 = {}
    for c in kept:
        uniq2[c.gens] = c
    return list(uniq2.values())


def primary_decomposition_monomial(I):
    """Irredundant monomial primary decomposition.

    Splits mixed generators into irreducible components, groups them by
    radical, intersects each group into a primary component, and removes the
    redundant ones. The intersection of the result is checked against I.
    """
    if not I.is_proper():
        raise ValueError("the unit ideal has no primary decomposition")
    if I.is_zero():
        raise ValueError("the zero ideal is not supported")
    ring = I.ring
    irreducibles = _irreducible_components(I)
    by_radical = {}
    for c in irreducibles:
        by_radical.setdefault(frozenset(c.support()), []).append(c)
    primaries = []
    for rad, comps in sorted(by_radical.items(), key=lambda kv: (len(kv[0]), sorted(kv[0]))):
        q = comps[0]
        for c in comps[1:]:
            q = q.intersect(c)
        if not _is_primary(q.gens):
            raise AssertionError("grouped component is not primary")
        primaries.append(PrimaryComponent(q))
    kept = []
    for i, c in enumerate(primaries):
        others = [d for j, d in enumerate(primaries) if j != i]
        if others:
            inter = others[0].ideal
            for d in others[1:]:
                inter = inter.intersect(d.ideal)
            if c.ideal.contains(inter):
                continue
        kept.append(c)
    result = PrimaryComponentList(kept)
    if result.intersection() != I:
        raise AssertionError("decomposition does not intersect back to the input")
    rads = [c.prime_support for c in kept]
    if len(set(rads)) != len(rads):
        raise AssertionError("duplicate radicals after grouping")
    return result


def truncate_components(I, h):
    """I^{<=h}: intersection of the primary components of height <= h."""
    if h < 0:
        raise ValueError("h must be >= 0")
    if not I.is_proper() or I.is_zero():
        return I
    comps = [c for c in primary_decomposition_monomial(I) if c.height <= h]
    if not comps:
        return MonomialIdeal(I.ring, [(0,) * I.ring.nvars])
    out = comps[0].ideal
    for c in comps[1:]:
        out = out.intersect(c.ideal)
    return out


def monomial_saturation(I):
    """(I : m^infinity) with m the ideal of all variables, by iterated colon."""
    ring = I.ring
    n = ring.nvars
    cur = I
    while True:
        nxt = None
        for v in range(n):
            u = tuple(1 if i == v else 0 for i in range(n))
            cv = cur.colon_monomial(u)
            nxt = cv if nxt is None else nxt.intersect(cv)
        if nxt is None or nxt == cur:
            return cur
        cur = nxt


def binomial_edge_ideal(n, edges, field=None):
    """Ideal of K[x_1..x_n, y_1..y_n] generated by x_i y_j - x_j y_i over edges."""
    from .polyring import QQ, Ring

    if n < 1:
        raise ValueError("need at least one vertex")
    names = tuple("x%d" % i for i in range(1, n + 1)) + tuple(
        "y%d" % i for i in range(1, n + 1)
    )
    ring = Ring(names, field=field or QQ)
    gens = []
    for (i, j) in edges:
        if not (1 <= i < j <= n):
            raise ValueError("edge (%r, %r) out of range" % (i, j))
        xi, yi = ring.var(i - 1), ring.var(n + i - 1)
        xj, yj = ring.var(j - 1), ring.var(n + j - 1)
        gens.append(xi * yj - xj * yi)
    return Ideal(ring, gens)


# ---------------------------------------------------------------------------
# Stanley-Reisner complexes and the Hochster-formula oracle


def stanley_reisner_faces(I):
    """All faces of the Stanley-Reisner complex of a square-free ideal."""
    if not is_squarefree(I):
        raise ValueError("Stanley-Reisner complex needs a square-free ideal")
    if I.is_unit():
        return frozenset()
    n = I.ring.nvars
    supports = [frozenset(i for i, x in enumerate(e) if x) for e in I.gens]
    faces = set()
    for mask in range(1 << n):
        s = frozenset(i for i in range(n) if mask >> i & 1)
        if not any(sup <= s for sup in supports):
            faces.add(s)
    return frozenset(faces)


def _rank(rows, ncols):
    """Rank of a matrix with Fraction entries (Gaussian elimination)."""
    mat = [list(r) for r in rows]
    rank = 0
    col = 0
    nrows = len(mat)
    while rank < nrows and col < ncols:
        piv = None
        for r in range(rank, nrows):
            if mat[r][col]:
                piv = r
                break
        if piv is None:
            col += 1
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        prow = mat[rank]
        inv = Fraction(1) / prow[col]
        for r in range(rank + 1, nrows):
            if mat[r][col]:
                f = mat[r][col] * inv
                row = mat[r]
                for c in range(col, ncols):
                    row[c] -= f * prow[c]
        rank += 1
        col += 1
    return rank


def reduced_homology_dims(faces):
    """Reduced simplicial homology dims over Q, indexed by dimension.

    faces: iterable of frozensets including the empty face for a nonvoid
    complex. The void complex (no faces) has no homology at all.
    """
    faces = set(faces)
    if not faces:
        return {}
    by_dim = {}
    for f in faces:
        by_dim.setdefault(len(f) - 1, []).append(tuple(sorted(f)))
    for d in by_dim:
        by_dim[d].sort()
    dims = sorted(by_dim)
    index = {d: {f: k for k, f in enumerate(by_dim[d])} for d in dims}
    ranks = {}
    for d in dims:
        if d - 1 not in by_dim:
            ranks[d] = 0
            continue
        rows = []
        lower = index[d - 1]
        for f in by_dim[d]:
            row = [Fraction(0)] * len(lower)
            for k in range(len(f)):
                g = f[:k] + f[k + 1:]
                row[lower[g]] += Fraction((-1) ** k)
            rows.append(row)
        ranks[d] = _rank(rows, len(lower)) if rows else 0
    out = {}
    for d in dims:
        f_d = len(by_dim[d])
        out[d] = f_d - ranks.get(d, 0) - ranks.get(d + 1, 0)
    return {d: v for d, v in out.items() if v}


def _binom(n, k):
    if k < 0 or k > n:
        return 0
    out = 1
    for i in range(k):
        out = out * (n - i) // (i + 1)
    return out


_hochster_cache = {}


def hochster_local_cohomology(I, i, window):
    """Graded local cohomology dims of R/I for square-free monomial I.

    Computed from reduced homology of links in the Stanley-Reisner complex:
    dim H^i_m(R/I)_j sums, over faces W, the count of exponent vectors of
    total degree j supported exactly on W against the (i-|W|-1)-st reduced
    cohomology of the link of W.
    """
    if not is_squarefree(I):
        raise ValueError("the Hochster route needs a square-free monomial ideal")
    window = tuple(window)
    key = I.key()
    cached = _hochster_cache.get(key)
    if cached is None:
        faces = stanley_reisner_faces(I)
        link_h = {}
        for W in faces:
            link = frozenset(f - W for f in faces if W <= f)
            link_h[W] = reduced_homology_dims(link)
        cached = link_h
        _hochster_cache[key] = cached
    dims = {}
    for j in window:
        if j > 0:
            dims[j] = 0
            continue
        total = 0
        for W, hdims in cached.items():
            w = len(W)
            if j == 0:
                if w == 0:
                    total += hdims.get(i - 1, 0)
                continue
            if w == 0 or w > -j:
                continue
            total += _binom(-j - 1, w - 1) * hdims.get(i - w - 1, 0)
        dims[j] = total
    return GradedDims(dims, window)
