"""Exact sparse multivariate polynomials, monomial orders, and weight operations.

Coefficients are exact: rationals by default, or a prime field Z/p chosen per
ring. Monomials are exponent tuples, polynomials are canonical maps from
exponent tuples to nonzero coefficients. Every ring carries a positive
multigrading: a weighted Z-grading for ordinary rings, extended to a
Z^2-grading when a homogenizing variable t is adjoined (deg t = (0, 1)).

All values are immutable after construction and all operations are pure.
"""

from __future__ import annotations

from fractions import Fraction

LESS, EQUAL, GREATER = -1, 0, 1

MAX_EXPONENT = 1 << 60  # guard against runaway exponent growth


class DimensionMismatch(ValueError):
    pass


class ZeroPolynomialError(ValueError):
    pass


class NonGlobalOrderError(ValueError):
    pass


# ---------------------------------------------------------------------------
# coefficient fields


def _is_prime(p):
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


class PrimeFieldElement:
    """Residue in Z/p, kept in [0, p)."""

    __slots__ = ("v", "p")

    def __init__(self, v, p):
        self.v = v % p
        self.p = p

    def __add__(self, other):
        return PrimeFieldElement(self.v + other.v, self.p)

    def __sub__(self, other):
        return PrimeFieldElement(self.v - other.v, self.p)

    def __mul__(self, other):
        return PrimeFieldElement(self.v * other.v, self.p)

    def __truediv__(self, other):
        if other.v == 0:
            raise ZeroDivisionError("division by zero in prime field")
        return PrimeFieldElement(self.v * pow(other.v, self.p - 2, self.p), self.p)

    def __neg__(self):
        return PrimeFieldElement(-self.v, self.p)

    def __eq__(self, other):
        return (
            isinstance(other, PrimeFieldElement)
            and self.v == other.v
            and self.p == other.p
        )

    def __hash__(self):
        return hash((self.v, self.p))

    def __bool__(self):
        return self.v != 0

    def __repr__(self):
        return "%d" % self.v


class RationalField:
    """The field Q; elements are fractions.Fraction values."""

    name = "Q"

    def __call__(self, num, den=1):
        return Fraction(num, den)

    @property
    def zero(self):
        return Fraction(0)

    @property
    def one(self):
        return Fraction(1)

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("Q")

    def __repr__(self):
        return "Q"


class PrimeField:
    """The field Z/p for a prime p < 2^31."""

    def __init__(self, p):
        if not isinstance(p, int) or not _is_prime(p) or p >= (1 << 31):
            raise ValueError("prime field needs a prime p < 2^31, got %r" % (p,))
        self.p = p
        self.name = "F%d" % p

    def __call__(self, num, den=1):
        x = PrimeFieldElement(num, self.p)
        if den != 1:
            x = x / PrimeFieldElement(den, self.p)
        return x

    @property
    def zero(self):
        return PrimeFieldElement(0, self.p)

    @property
    def one(self):
        return PrimeFieldElement(1, self.p)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and self.p == other.p

    def __hash__(self):
        return hash(("Fp", self.p))

    def __repr__(self):
        return self.name


QQ = RationalField()


def scalar_key(c):
    """Hashable canonical key of a coefficient."""
    if isinstance(c, Fraction):
        return (c.numerator, c.denominator)
    return (c.v,)


# ---------------------------------------------------------------------------
# monomials (plain exponent tuples)


def mono_mul(a, b):
    e = tuple(x + y for x, y in zip(a, b))
    if any(x > MAX_EXPONENT for x in e):
        raise OverflowError("monomial exponent overflow")
    return e


def mono_divides(a, b):
    """True if x^a divides x^b."""
    return all(x <= y for x, y in zip(a, b))


def mono_div(a, b):
    """Exponent vector of x^a / x^b, or None if not divisible."""
    e = tuple(x - y for x, y in zip(a, b))
    if any(x < 0 for x in e):
        return None
    return e


def mono_lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def mono_gcd(a, b):
    return tuple(min(x, y) for x, y in zip(a, b))


# ---------------------------------------------------------------------------
# monomial orders

class MonomialOrder:
    """Total multiplicative order on monomials, realized by a sort key.

    key(e) returns a tuple of integers; e1 > e2 in the order iff
    key(e1) > key(e2) lexicographically.
    """

    is_global = True
    kind = "abstract"

    def key(self, e):
        raise NotImplementedError

    def __repr__(self):
        return self.kind


class Lex(MonomialOrder):
    kind = "lex"

    def key(self, e):
        return e


class GrevLex(MonomialOrder):
    kind = "grevlex"

    def key(self, e):
        return (sum(e),) + tuple(-x for x in reversed(e))


class WeightOrder(MonomialOrder):
    """Order by w-weight, ties broken by an explicit tiebreak order."""

    kind = "weight"

    def __init__(self, w, tiebreak):
        self.w = tuple(int(x) for x in w)
        if any(x < 0 for x in self.w):
            raise ValueError("weight vector entries must be >= 0")
        self.tiebreak = tiebreak
        self.is_global = tiebreak.is_global

    def key(self, e):
        if len(e) != len(self.w):
            raise DimensionMismatch("weight vector length %d != %d" % (len(self.w), len(e)))
        return (sum(wi * ei for wi, ei in zip(self.w, e)),) + tuple(self.tiebreak.key(e))

    def __repr__(self):
        return "weight(%s, %r)" % (list(self.w), self.tiebreak)


class BlockOrder(MonomialOrder):
    """Elimination order: first block compared by `first`, then `second`."""

    kind = "block"

    def __init__(self, split, first, second):
        self.split = int(split)
        self.first = first
        self.second = second
        self.is_global = first.is_global and second.is_global

    def key(self, e):
        return tuple(self.first.key(e[: self.split])) + tuple(self.second.key(e[self.split:]))

    def __repr__(self):
        return "block(%d, %r, %r)" % (self.split, self.first, self.second)


def compare(order, m1, m2):
    """Compare two monomials; returns LESS, EQUAL or GREATER."""
    if len(m1) != len(m2):
        raise DimensionMismatch("monomials of length %d and %d" % (len(m1), len(m2)))
    k1, k2 = order.key(m1), order.key(m2)
    if k1 < k2:
        return LESS
    if k1 > k2:
        return GREATER
    return EQUAL


# ---------------------------------------------------------------------------
# rings


def _normalize_degrees(names, degrees):
    n = len(names)
    if degrees is None:
        return tuple((1,) for _ in range(n))
    out = []
    for d in degrees:
        if isinstance(d, int):
            out.append((d,))
        else:
            out.append(tuple(int(x) for x in d))
    if len(out) != n:
        raise ValueError("need one degree per variable")
    rank = len(out[0])
    for d in out:
        if len(d) != rank:
            raise ValueError("inconsistent grading rank")
        if any(x < 0 for x in d):
            raise ValueError("grading entries must be >= 0")
        if all(x == 0 for x in d):
            raise ValueError("zero degree vector not allowed")
    if rank == 1 and any(d[0] < 1 for d in out):
        raise ValueError("Z-grading must be positive")
    return tuple(out)


class Ring:
    """Polynomial ring over an exact field with a positive multigrading."""

    __slots__ = ("field", "names", "degrees", "_index", "_hash")

    def __init__(self, names, degrees=None, field=QQ):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise ValueError("variable names must be unique")
        self.names = names
        self.degrees = _normalize_degrees(names, degrees)
        self.field = field
        self._index = {nm: i for i, nm in enumerate(names)}
        self._hash = hash((field, names, self.degrees))

    @property
    def nvars(self):
        return len(self.names)

    @property
    def grading_rank(self):
        return len(self.degrees[0]) if self.names else 1

    @property
    def zero_degree(self):
        return (0,) * self.grading_rank

    def monomial_degree(self, e):
        deg = [0] * self.grading_rank
        for x, d in zip(e, self.degrees):
            if x:
                for k in range(len(d)):
                    deg[k] += x * d[k]
        return tuple(deg)

    def var_index(self, name):
        if name not in self._index:
            raise KeyError("unknown variable %r" % name)
        return self._index[name]

    def var(self, i):
        e = [0] * self.nvars
        e[i] = 1
        return Polynomial(self, {tuple(e): self.field.one})

    def variables(self):
        return tuple(self.var(i) for i in range(self.nvars))

    @property
    def zero(self):
        return Polynomial(self, {})

    @property
    def one(self):
        return Polynomial(self, {(0,) * self.nvars: self.field.one})

    def const(self, c):
        if isinstance(c, int):
            c = self.field(c)
        if not c:
            return self.zero
        return Polynomial(self, {(0,) * self.nvars: c})

    def monomial(self, e, c=1):
        if isinstance(c, int):
            c = self.field(c)
        e = tuple(int(x) for x in e)
        if len(e) != self.nvars or any(x < 0 for x in e):
            raise ValueError("bad exponent vector %r" % (e,))
        if not c:
            return self.zero
        return Polynomial(self, {e: c})

    def from_terms(self, pairs):
        """Build a polynomial from (exponents, coefficient) pairs, merging."""
        coeffs = {}
        for e, c in pairs:
            e = tuple(e)
            if len(e) != self.nvars:
                raise DimensionMismatch("exponent tuple of length %d" % len(e))
            if isinstance(c, int):
                c = self.field(c)
            nc = coeffs.get(e, self.field.zero) + c
            if nc:
                coeffs[e] = nc
            elif e in coeffs:
                del coeffs[e]
        return Polynomial(self, coeffs)

    def extend(self, w, name="t"):
        """Adjoin a homogenizing variable of degree (0,...,0,1), weights w."""
        w = tuple(int(x) for x in w)
        if len(w) != self.nvars:
            raise DimensionMismatch("weight vector length != nvars")
        while name in self.names:
            name += "_"
        degs = [d + (wi,) for d, wi in zip(self.degrees, w)]
        degs.append((0,) * self.grading_rank + (1,))
        return Ring(self.names + (name,), degs, self.field)

    def restrict_last(self):
        """Drop the last variable (and the last grading component if rank > 1)."""
        if self.nvars == 0:
            raise ValueError("no variable to drop")
        degs = [d for d in self.degrees[:-1]]
        if self.grading_rank > 1:
            degs = [d[:-1] for d in degs]
        return Ring(self.names[:-1], degs, self.field)

    def __eq__(self, other):
        return (
            isinstance(other, Ring)
            and self.field == other.field
            and self.names == other.names
            and self.degrees == other.degrees
        )

    def __hash__(self):
        return self._hash

    def key(self):
        degkey = self.degrees
        fkey = self.field.name
        return (fkey, self.names, degkey)

    def __repr__(self):
        return "%s[%s]" % (self.field.name, ",".join(self.names))


# ---------------------------------------------------------------------------
# polynomials


class Polynomial:
    """Sparse polynomial: dict from exponent tuple to nonzero coefficient."""

    __slots__ = ("ring", "coeffs")

    def __init__(self, ring, coeffs):
        self.ring = ring
        self.coeffs = coeffs

    def is_zero(self):
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def _coerce(self, other):
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise DimensionMismatch("polynomials from different rings")
            return other
        if isinstance(other, int):
            return self.ring.const(other)
        if isinstance(other, Fraction) and isinstance(self.ring.field, RationalField):
            return self.ring.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            nc = out.get(e)
            nc = c if nc is None else nc + c
            if nc:
                out[e] = nc
            elif e in out:
                del out[e]
        return Polynomial(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.ring, {e: -c for e, c in self.coeffs.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) or not isinstance(other, Polynomial):
            other_p = self._coerce(other)
            if other_p is NotImplemented:
                return NotImplemented
            other = other_p
        elif other.ring != self.ring:
            raise DimensionMismatch("polynomials from different rings")
        out = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                e = mono_mul(e1, e2)
                c = c1 * c2
                nc = out.get(e)
                nc = c if nc is None else nc + c
                if nc:
                    out[e] = nc
                elif e in out:
                    del out[e]
        return Polynomial(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a nonnegative integer")
        out = self.ring.one
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base if k > 1 else base
            k >>= 1
        return out

    def scale(self, c):
        if isinstance(c, int):
            c = self.ring.field(c)
        if not c:
            return self.ring.zero
        return Polynomial(self.ring, {e: x * c for e, x in self.coeffs.items()})

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            if isinstance(other, int):
                return self == self.ring.const(other)
            return NotImplemented
        return self.ring == other.ring and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.ring, self.key()))

    def key(self):
        """Canonical hashable form (sorted terms)."""
        return tuple(sorted((e, scalar_key(c)) for e, c in self.coeffs.items()))

    def support(self):
        return frozenset(self.coeffs)

    def terms(self, order=None):
        """Term list, strictly descending under the given (default grevlex) order."""
        order = order or GrevLex()
        return sorted(self.coeffs.items(), key=lambda t: order.key(t[0]), reverse=True)

    def leading_term(self, order):
        if not self.coeffs:
            raise ZeroPolynomialError("zero polynomial has no leading term")
        e = max(self.coeffs, key=order.key)
        return e, self.coeffs[e]

    def leading_monomial(self, order):
        return self.leading_term(order)[0]

    def total_degree(self):
        if not self.coeffs:
            raise ZeroPolynomialError("zero polynomial has no degree")
        return max(sum(e) for e in self.coeffs)

    def is_homogeneous(self):
        degs = {self.ring.monomial_degree(e) for e in self.coeffs}
        return len(degs) <= 1

    def multidegree(self):
        degs = {self.ring.monomial_degree(e) for e in self.coeffs}
        if len(degs) != 1:
            raise ValueError("polynomial is zero or not homogeneous")
        return next(iter(degs))

    def is_constant(self):
        return all(all(x == 0 for x in e) for e in self.coeffs)

    def constant_coefficient(self):
        return self.coeffs.get((0,) * self.ring.nvars, self.ring.field.zero)

    def is_monomial(self):
        return len(self.coeffs) == 1

    def __repr__(self):
        return format_polynomial(self)


# ---------------------------------------------------------------------------
# weight operations


def support(f):
    """The set of monomials with nonzero coefficient."""
    return f.support()


def weight(f, w):
    """max of w-weights over the support; rejects the zero polynomial."""
    if f.is_zero():
        raise ZeroPolynomialError("weight of the zero polynomial is undefined")
    if len(w) != f.ring.nvars:
        raise DimensionMismatch("weight vector length != nvars")
    return max(sum(wi * ei for wi, ei in zip(w, e)) for e in f.coeffs)


def initial_form(f, w):
    """Sum of the terms of maximal w-weight."""
    wf = weight(f, w)
    keep = {
        e: c
        for e, c in f.coeffs.items()
        if sum(wi * ei for wi, ei in zip(w, e)) == wf
    }
    return Polynomial(f.ring, keep)


def homogenize(f, w, extended_ring=None):
    """w-homogenization of f: pad every term with t^(w(f)-w(mu)) in R[t]."""
    wf = weight(f, w)
    P = extended_ring or f.ring.extend(w)
    out = {}
    for e, c in f.coeffs.items():
        wm = sum(wi * ei for wi, ei in zip(w, e))
        out[e + (wf - wm,)] = c
    return Polynomial(P, out)


def dehomogenize(F, base_ring=None):
    """Substitute t = 1 (t the last variable) and renormalize."""
    R = base_ring or F.ring.restrict_last()
    return R.from_terms((e[:-1], c) for e, c in F.coeffs.items())


def specialize_t0(F, base_ring=None):
    """Substitute t = 0 (t the last variable)."""
    R = base_ring or F.ring.restrict_last()
    return R.from_terms((e[:-1], c) for e, c in F.coeffs.items() if e[-1] == 0)


# ---------------------------------------------------------------------------
# text syntax: terms joined by +/-, coefficient [int[/int]], monomial v1^e1*v2^e2


def format_scalar(c):
    if isinstance(c, Fraction):
        if c.denominator == 1:
            return str(c.numerator)
        return "%d/%d" % (c.numerator, c.denominator)
    return str(c.v)


def format_polynomial(f, order=None):
    if f.is_zero():
        return "0"
    ring = f.ring
    parts = []
    for e, c in f.terms(order):
        factors = [
            nm if x == 1 else "%s^%d" % (nm, x)
            for nm, x in zip(ring.names, e)
            if x
        ]
        cs = format_scalar(c)
        neg = cs.startswith("-")
        if neg:
            cs = cs[1:]
        if factors and cs == "1":
            body = "*".join(factors)
        elif factors:
            body = cs + "*" + "*".join(factors)
        else:
            body = cs
        if not parts:
            parts.append(("-" if neg else "") + body)
        else:
            parts.append(("- " if neg else "+ ") + body)
    return " ".join(parts)


class _Scanner:
    def __init__(self, text):
        self.text = text
        self.i = 0

    def skip_ws(self):
        while self.i < len(self.text) and self.text[self.i] in " \t":
            self.i += 1

    def peek(self):
        self.skip_ws()
        return self.text[self.i] if self.i < len(self.text) else ""

    def take(self):
        ch = self.peek()
        self.i += 1
        return ch

    def number(self):
        self.skip_ws()
        j = self.i
        while j < len(self.text) and self.text[j].isdigit():
            j += 1
        if j == self.i:
            raise ValueError("expected a number at position %d in %r" % (self.i, self.text))
        v = int(self.text[self.i:j])
        self.i = j
        return v

    def ident(self):
        self.skip_ws()
        j = self.i
        if j >= len(self.text) or not (self.text[j].isalpha() or self.text[j] == "_"):
            raise ValueError("expected a variable at position %d in %r" % (self.i, self.text))
        j += 1
        while j < len(self.text) and (self.text[j].isalnum() or self.text[j] == "_"):
            j += 1
        name = self.text[self.i:j]
        self.i = j
        return name


def parse_polynomial(ring, text):
    """Parse the term syntax used by the CLI and fixtures, e.g. `x1*y2 - x2*y1`."""
    sc = _Scanner(text)
    terms = []
    first = True
    while True:
        ch = sc.peek()
        if not ch:
            if first:
                raise ValueError("empty polynomial text %r" % text)
            break
        sign = 1
        if ch in "+-":
            sc.take()
            sign = -1 if ch == "-" else 1
        elif not first:
            raise ValueError("expected + or - at position %d in %r" % (sc.i, text))
        first = False
        num, den = 1, 1
        have_coeff = False
        if sc.peek().isdigit():
            num = sc.number()
            have_coeff = True
            if sc.peek() == "/":
                sc.take()
                den = sc.number()
        exps = [0] * ring.nvars
        have_var = False
        while True:
            ch = sc.peek()
            if ch == "*":
                sc.take()
                ch = sc.peek()
            elif have_var or (have_coeff and not (ch.isalpha() or ch == "_")):
                break
            if not (ch.isalpha() or ch == "_"):
                if have_var or have_coeff:
                    break
                raise ValueError("expected a term at position %d in %r" % (sc.i, text))
            name = sc.ident()
            k = 1
            if sc.peek() == "^":
                sc.take()
                k = sc.number()
            exps[ring.var_index(name)] += k
            have_var = True
        c = ring.field(sign * num, den)
        terms.append((tuple(exps), c))
    return ring.from_terms(terms)
