"""Ideal arithmetic on top of the module engine.

Reduced Groebner bases, initial ideals (order and weight flavors), weight
homogenization of ideals, colon ideals, saturation, ideal equality, and the
realization of a monomial order by a strictly positive weight vector via
exact Fourier-Motzkin elimination.
"""

from __future__ import annotations

from fractions import Fraction

from .polyring import (
    GrevLex,
    NonGlobalOrderError,
    Polynomial,
    WeightOrder,
    homogenize,
    dehomogenize,
    specialize_t0,
)
from .modules import (
    PositionOverTerm,
    PreparedBasis,
    module_buchberger,
    module_normal_form,
    module_syzygies,
)


def _poly_to_vec(f):
    return {(0, e): c for e, c in f.coeffs.items()}


def _vec_to_poly(v, ring):
    return Polynomial(ring, {e: c for (_, e), c in v.items()})


class Ideal:
    """Ideal given by generators; zero generators are dropped."""

    __slots__ = ("ring", "gens")

    def __init__(self, ring, gens):
        gens = tuple(g for g in gens if not g.is_zero())
        for g in gens:
            if g.ring != ring:
                raise ValueError("generator from a different ring")
        self.ring = ring
        self.gens = gens

    def is_zero(self):
        return not self.gens

    def is_monomial(self):
        return all(g.is_monomial() for g in self.gens)

    def is_homogeneous(self):
        return all(g.is_homogeneous() for g in self.gens)

    def key(self):
        return (self.ring.key(), tuple(sorted(g.key() for g in self.gens)))

    def __eq__(self, other):
        """Syntactic equality of generator lists; use ideal_equal for ideals."""
        return (
            isinstance(other, Ideal)
            and self.ring == other.ring
            and sorted(g.key() for g in self.gens) == sorted(g.key() for g in other.gens)
        )

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return "Ideal(%s)" % ", ".join(map(str, self.gens))


class GroebnerBasis:
    """Reduced Groebner basis: monic, auto-reduced, sorted by leading monomial."""

    __slots__ = ("ring", "order", "elements")

    def __init__(self, ring, order, elements):
        self.ring = ring
        self.order = order
        self.elements = tuple(elements)

    def leading_monomials(self):
        return tuple(g.leading_monomial(self.order) for g in self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    def __repr__(self):
        from .polyring import format_polynomial

        return "GroebnerBasis(%s)" % ", ".join(
            format_polynomial(g, self.order) for g in self.elements
        )


def buchberger(I, order):
    """Reduced Groebner basis of I under a global monomial order."""
    if not order.is_global:
        raise NonGlobalOrderError("non-global orders are not supported")
    mod_order = PositionOverTerm(order)
    gb = module_buchberger([_poly_to_vec(g) for g in I.gens], mod_order, I.ring)
    return GroebnerBasis(I.ring, order, [_vec_to_poly(v, I.ring) for v in gb])


def normal_form(f, G):
    """Remainder of f on division by a Groebner basis; deterministic."""
    if f.ring != G.ring:
        raise ValueError("polynomial and basis from different rings")
    mod_order = PositionOverTerm(G.order)
    vecs = [_poly_to_vec(g) for g in G.elements]
    return _vec_to_poly(module_normal_form(_poly_to_vec(f), vecs, mod_order), f.ring)


def ideal_member(f, I, order=None):
    G = I if isinstance(I, GroebnerBasis) else buchberger(I, order or GrevLex())
    return normal_form(f, G).is_zero()


def initial_ideal(I, order):
    """Monomial ideal of leading terms of the reduced Groebner basis."""
    G = buchberger(I, order)
    ring = I.ring
    gens = [ring.monomial(e) for e in G.leading_monomials()]
    return Ideal(ring, gens)


def homogenize_ideal(I, w):
    """hom_w(I) in R[t], generated by hom_w of a weight-order Groebner basis.

    Homogenizing a Groebner basis under the order weight(w) refined by grevlex
    (rather than arbitrary generators) makes the result saturated with respect
    to t.
    """
    ring = I.ring
    order = WeightOrder(w, GrevLex())
    G = buchberger(I, order)
    P = ring.extend(w)
    return Ideal(P, [homogenize(g, w, P) for g in G])


def initial_ideal_w(I, w):
    """in_w(I): generated by the initial forms init_w(f) for f in I.

    Computed by setting t = 0 in the generators of hom_w(I) (which form a
    Groebner basis of hom_w(I) under the extended weight order with t last).
    """
    ring = I.ring
    H = homogenize_ideal(I, w)
    gens = [specialize_t0(h, ring) for h in H.gens]
    G = buchberger(Ideal(ring, gens), GrevLex())
    return Ideal(ring, tuple(G.elements))


def ideal_equal(I, J):
    """True iff the reduced Groebner bases under grevlex coincide."""
    if I.ring != J.ring:
        raise ValueError("ideals from different rings")
    GI = buchberger(I, GrevLex())
    GJ = buchberger(J, GrevLex())
    return [g.key() for g in GI.elements] == [g.key() for g in GJ.elements]


def ideal_contains(I, J):
    """True iff I contains J (every generator of J reduces to 0)."""
    G = buchberger(I, GrevLex())
    return all(normal_form(g, G).is_zero() for g in J.gens)


def ideal_sum(I, J):
    return Ideal(I.ring, I.gens + J.gens)


def ideal_quotient(I, f):
    """(I : f) = {g : g*f in I}."""
    if f.is_zero():
        raise ValueError("colon by zero")
    ring = I.ring
    if not I.gens:
        return Ideal(ring, ())
    cols = [_poly_to_vec(f)] + [_poly_to_vec(g) for g in I.gens]
    syz = module_syzygies(cols, 1, ring)
    quot = []
    for s in syz:
        g = Polynomial(ring, {e: c for (pos, e), c in s.items() if pos == 0})
        if not g.is_zero():
            quot.append(g)
    G = buchberger(Ideal(ring, quot), GrevLex()) if quot else ()
    return Ideal(ring, tuple(G.elements) if quot else ())


def saturation(I, f):
    """(I : f^infinity) by iterated colon ideals until stabilization."""
    cur = I
    while True:
        nxt = ideal_quotient(cur, f)
        if ideal_equal(nxt, cur):
            return cur
        cur = nxt


# ---------------------------------------------------------------------------
# weight realization via exact Fourier-Motzkin elimination


def _fm_eliminate(constraints, v):
    """Eliminate variable v from constraints sum(c_i x_i) >= rhs."""
    pos, neg, zero = [], [], []
    for (c, rhs) in constraints:
        if c[v] > 0:
            pos.append((c, rhs))
        elif c[v] < 0:
            neg.append((c, rhs))
        else:
            zero.append((c, rhs))
    out = {(tuple(c), rhs) for (c, rhs) in zero}
    for (cp, rp) in pos:
        for (cn, rn) in neg:
            a, b = -cn[v], cp[v]
            c = tuple(a * x + b * y for x, y in zip(cp, cn))
            out.add((c, a * rp + b * rn))
    return [(tuple(c), rhs) for (c, rhs) in sorted(out)]


def solve_positive_integer(constraints, nvars):
    """Smallest-by-back-substitution positive rational solution, scaled to Z.

    constraints: list of (coeff tuple, rhs) meaning sum(c_i x_i) >= rhs.
    Eliminates x_{n-1}, ..., x_1 in turn, then assigns x_0, x_1, ... each the
    smallest feasible value; finally scales by the lcm of the denominators.
    """
    systems = [list(constraints)]
    for v in range(nvars - 1, 0, -1):
        systems.append(_fm_eliminate(systems[-1], v))
    x = [None] * nvars
    for v in range(nvars):
        sysv = systems[nvars - 1 - v]
        lower = Fraction(0)
        uppers = []
        for (c, rhs) in sysv:
            acc = Fraction(rhs) - sum(Fraction(c[u]) * x[u] for u in range(v))
            if c[v] > 0:
                lower = max(lower, acc / c[v])
            elif c[v] < 0:
                uppers.append(acc / c[v])
        if uppers and lower > min(uppers):
            raise ValueError("infeasible inequality system")
        x[v] = lower
    L = 1
    for xi in x:
        L = L * xi.denominator // _gcd(L, xi.denominator)
    return tuple(int(xi * L) for xi in x)


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def realize_weight(G):
    """Strictly positive integer weight vector w with in_w(I) = in_<(I).

    Solves, by exact Fourier-Motzkin elimination, the system
    w . lead(g) >= w . mu + 1 for every non-leading monomial mu of every
    basis element, together with w_i >= 1, and asserts the resulting ideal
    equality.
    """
    ring = G.ring
    n = ring.nvars
    constraints = []
    for i in range(n):
        c = [0] * n
        c[i] = 1
        constraints.append((tuple(c), 1))
    for g in G.elements:
        lead = g.leading_monomial(G.order)
        for e in g.coeffs:
            if e == lead:
                continue
            diff = tuple(a - b for a, b in zip(lead, e))
            constraints.append((diff, 1))
    w = solve_positive_integer(constraints, n)
    for (c, rhs) in constraints:
        if sum(ci * wi for ci, wi in zip(c, w)) < rhs:
            raise AssertionError("Fourier-Motzkin produced an invalid weight")
    I = Ideal(ring, G.elements)
    if not ideal_equal(initial_ideal_w(I, w), initial_ideal(I, G.order)):
        raise AssertionError("realized weight does not reproduce the initial ideal")
    return w
