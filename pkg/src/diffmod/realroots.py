"""Exact real-root isolation for univariate rational polynomials, sign
conditions on semialgebraic sets, and bounded rational witness search.

Univariate work happens on dense coefficient lists (low degree first);
isolation is Sturm bisection on the square-free part after all rational
roots have been split off exactly, so rational roots are always
reported as exact points and every interval brackets a sign change.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError, StructuralError
from .poly import Polynomial


# -- dense univariate helpers -------------------------------------------

def _strip(c):
    while c and c[-1] == 0:
        c.pop()
    return c


def _deg(c):
    return len(c) - 1


def _dense_from_poly(p):
    used = p.vars_used()
    if len(used) > 1:
        raise StructuralError("polynomial is not univariate")
    var = used.pop() if used else 0
    coeffs = [Fraction(0)] * (p.degree_in(var) + 1 if not p.is_zero() else 1)
    for m, c in p.terms.items():
        coeffs[m[var]] = c
    return _strip(coeffs), var


def _dense_to_poly(ring, var, coeffs):
    terms = {}
    n = ring.nvars
    for e, c in enumerate(coeffs):
        if c:
            mono = tuple(e if i == var else 0 for i in range(n))
            terms[mono] = c
    return Polynomial(ring, terms)


def _eval(c, x):
    acc = Fraction(0)
    for coef in reversed(c):
        acc = acc * x + coef
    return acc


def _derive(c):
    return _strip([c[i] * i for i in range(1, len(c))])


def _neg(c):
    return [-a for a in c]


def _rem(a, b):
    a = list(a)
    db, lb = _deg(b), b[-1]
    while a and _deg(a) >= db:
        f = a[-1] / lb
        shift = _deg(a) - db
        for i, bc in enumerate(b):
            a[i + shift] -= f * bc
        a = _strip(a)
    return a


def _gcd(a, b):
    a, b = list(a), list(b)
    while b:
        a, b = b, _rem(a, b)
    if a:
        lead = a[-1]
        a = [x / lead for x in a]
    return a


def _exact_div(a, b):
    q = [Fraction(0)] * (max(_deg(a) - _deg(b), -1) + 1)
    a = list(a)
    db, lb = _deg(b), b[-1]
    while a and _deg(a) >= db:
        f = a[-1] / lb
        shift = _deg(a) - db
        q[shift] = f
        for i, bc in enumerate(b):
            a[i + shift] -= f * bc
        a = _strip(a)
    if a:
        raise DomainError("inexact univariate division")
    return _strip(q)


def _squarefree(c):
    d = _derive(c)
    if not d:
        return [Fraction(1)] if c else []
    g = _gcd(c, d)
    if _deg(g) == 0:
        return c
    return _exact_div(c, g)


def _to_integer(c):
    """Scale to integer coefficients, primitive, positive leading coefficient."""
    from math import gcd as igcd
    den = 1
    for f in c:
        den = den * f.denominator // igcd(den, f.denominator)
    ints = [int(f * den) for f in c]
    g = 0
    for v in ints:
        g = igcd(g, abs(v))
    if g:
        ints = [v // g for v in ints]
    if ints and ints[-1] < 0:
        ints = [-v for v in ints]
    return [Fraction(v) for v in ints]


def cauchy_bound(c):
    """1 + max |a_i| / |a_lead|: all real roots lie inside (-B, B)."""
    lead = abs(c[-1])
    m = max((abs(a) for a in c[:-1]), default=Fraction(0))
    return 1 + m / lead


# -- Sturm sequences -----------------------------------------------------

def sturm_chain_dense(c):
    chain = [list(c), _derive(c)]
    if not chain[1]:
        chain.pop()
    while len(chain) >= 2 and chain[-1]:
        r = _neg(_rem(chain[-2], chain[-1]))
        if not r:
            break
        chain.append(r)
    return chain


def sturm_sequence(p):
    """Sturm chain of p as a list of Polynomials (p, p', negated remainders)."""
    if not isinstance(p, Polynomial) or p.is_zero():
        raise DomainError("Sturm sequence needs a nonzero polynomial")
    c, var = _dense_from_poly(p)
    return [_dense_to_poly(p.ring, var, f) for f in sturm_chain_dense(c)]


def _variations(values):
    signs = [1 if v > 0 else -1 for v in values if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def sign_variations_at(chain, x):
    return _variations([_eval(f, x) for f in chain])


def count_roots_between(chain, lo, hi):
    """Distinct real roots in (lo, hi]."""
    return sign_variations_at(chain, lo) - sign_variations_at(chain, hi)


@dataclass(frozen=True)
class IsolatingInterval:
    lower: Fraction
    upper: Fraction
    exact: bool = False

    def contains(self, x):
        return self.lower <= x <= self.upper

    def width(self):
        return self.upper - self.lower

    def __str__(self):
        if self.exact:
            return "{%s}" % self.lower
        return "[%s, %s]" % (self.lower, self.upper)


def _rational_roots(ints):
    """All rational roots of an integer-coefficient polynomial, exactly."""
    c = list(ints)
    shift = 0
    while c and c[0] == 0:
        c.pop(0)
        shift += 1
    roots = set([Fraction(0)] if shift else [])
    if not c or _deg(c) == 0:
        return sorted(roots)

    def divisors(n):
        n = abs(int(n))
        out = []
        d = 1
        while d * d <= n:
            if n % d == 0:
                out.append(d)
                out.append(n // d)
            d += 1
        return sorted(set(out))

    a0 = int(c[0])
    an = int(c[-1])
    for p in divisors(a0):
        for q in divisors(an):
            for cand in (Fraction(p, q), Fraction(-p, q)):
                if cand not in roots and _eval(c, cand) == 0:
                    roots.add(cand)
    return sorted(roots)


def isolate_real_roots(p):
    """Disjoint isolating intervals, one per distinct real root of p.

    Rational roots come back as exact points; the remaining roots as
    intervals on which the square-free part changes sign.
    """
    if isinstance(p, Polynomial):
        c, _ = _dense_from_poly(p)
    else:
        c = _strip([Fraction(v) for v in p])
    if _deg(c) < 1:
        raise DomainError("root isolation needs a nonconstant polynomial")
    q = _to_integer(_squarefree(c))
    rational = _rational_roots(q)
    q2 = list(q)
    for r in rational:
        q2 = _exact_div(q2, [-r, Fraction(1)])

    out = [IsolatingInterval(r, r, exact=True) for r in rational]
    if _deg(q2) >= 1:
        chain = sturm_chain_dense(q2)
        bound = cauchy_bound(q2)
        stack = [(-bound, bound)]
        cells = []
        while stack:
            lo, hi = stack.pop()
            n = count_roots_between(chain, lo, hi)
            if n == 0:
                continue
            if n == 1:
                cells.append((lo, hi))
                continue
            mid = (lo + hi) / 2
            stack.append((lo, mid))
            stack.append((mid, hi))

        def shrink(lo, hi, exclude):
            # keep the unique chain root, push endpoints off `exclude`
            while exclude(lo, hi):
                mid = (lo + hi) / 2
                if count_roots_between(chain, mid, hi) == 1:
                    lo = mid
                else:
                    hi = mid
            return lo, hi

        cells = [shrink(lo, hi, lambda a, b: any(a <= r <= b for r in rational))
                 for lo, hi in cells]
        cells.sort()
        for k in range(1, len(cells)):
            prev_hi = cells[k - 1][1]
            cells[k] = shrink(*cells[k], exclude=lambda a, b: a <= prev_hi)
        out.extend(IsolatingInterval(lo, hi) for lo, hi in cells)
    out.sort(key=lambda iv: (iv.lower, iv.upper))
    return out


def refine_interval(p, interval, width):
    """Shrink an isolating interval below `width` by sign-change bisection."""
    if interval.exact:
        return interval
    c, _ = _dense_from_poly(p) if isinstance(p, Polynomial) else (_strip([Fraction(v) for v in p]), 0)
    q = _to_integer(_squarefree(c))
    for r in _rational_roots(q):
        q = _exact_div(q, [-r, Fraction(1)])
    lo, hi = interval.lower, interval.upper
    slo = _eval(q, lo)
    shi = _eval(q, hi)
    if slo == 0 or shi == 0 or (slo > 0) == (shi > 0):
        raise DomainError("interval does not bracket a sign change")
    while hi - lo >= width:
        mid = (lo + hi) / 2
        sm = _eval(q, mid)
        if (sm > 0) == (slo > 0):
            lo, slo = mid, sm
        else:
            hi, shi = mid, sm
    return IsolatingInterval(lo, hi)


# -- sign conditions and semialgebraic descriptions ----------------------

@dataclass(frozen=True)
class SignCondition:
    poly: Polynomial
    rel: str  # ">", "<", "="

    def __post_init__(self):
        if self.rel not in (">", "<", "="):
            raise StructuralError("bad relation %r" % self.rel)
        if self.rel in (">", "<") and self.poly.is_zero():
            raise StructuralError("strict sign condition on the zero polynomial")

    def holds_at(self, point):
        v = self.poly.evaluate(point)
        return {">": v > 0, "<": v < 0, "=": v == 0}[self.rel]

    def text(self):
        return "%s %s 0" % (self.poly.text(), self.rel)


class Desc:
    """Boolean combination tree over sign conditions."""

    def holds_at(self, point):
        raise NotImplementedError

    def atoms(self):
        raise NotImplementedError


@dataclass(frozen=True)
class Atom(Desc):
    cond: SignCondition

    def holds_at(self, point):
        return self.cond.holds_at(point)

    def atoms(self):
        return [self.cond]


@dataclass(frozen=True)
class And(Desc):
    parts: tuple

    def holds_at(self, point):
        return all(p.holds_at(point) for p in self.parts)

    def atoms(self):
        return [a for p in self.parts for a in p.atoms()]


@dataclass(frozen=True)
class Or(Desc):
    parts: tuple

    def holds_at(self, point):
        return any(p.holds_at(point) for p in self.parts)

    def atoms(self):
        return [a for p in self.parts for a in p.atoms()]


@dataclass(frozen=True)
class Not(Desc):
    part: Desc

    def holds_at(self, point):
        return not self.part.holds_at(point)

    def atoms(self):
        return self.part.atoms()


@dataclass(frozen=True)
class TrueDesc(Desc):
    def holds_at(self, point):
        return True

    def atoms(self):
        return []


def desc_and(*parts):
    return And(tuple(parts)) if parts else TrueDesc()


def desc_or(*parts):
    return Or(tuple(parts))


def atom(poly, rel):
    return Atom(SignCondition(poly, rel))


@dataclass(frozen=True)
class SemialgebraicDescription:
    tree: Desc
    nvars: int

    def holds_at(self, point):
        if len(point) != self.nvars:
            raise StructuralError("point dimension mismatch")
        return self.tree.holds_at(point)

    def conditions(self):
        return self.tree.atoms()


def to_dnf(tree):
    """List of conjunctive cells (lists of SignCondition), covering the set."""
    if isinstance(tree, TrueDesc):
        return [[]]
    if isinstance(tree, Atom):
        return [[tree.cond]]
    if isinstance(tree, And):
        cells = [[]]
        for part in tree.parts:
            cells = [c1 + c2 for c1 in cells for c2 in to_dnf(part)]
        return cells
    if isinstance(tree, Or):
        out = []
        for part in tree.parts:
            out.extend(to_dnf(part))
        return out
    if isinstance(tree, Not):
        inner = tree.part
        if isinstance(inner, Not):
            return to_dnf(inner.part)
        if isinstance(inner, Atom):
            p = inner.cond.poly
            rel = inner.cond.rel
            if rel == ">":
                return to_dnf(Or((atom(p, "<"), atom(p, "="))))
            if rel == "<":
                return to_dnf(Or((atom(p, ">"), atom(p, "="))))
            return to_dnf(Or((atom(p, ">"), atom(p, "<"))))
        if isinstance(inner, And):
            return to_dnf(Or(tuple(Not(q) for q in inner.parts)))
        if isinstance(inner, Or):
            return to_dnf(And(tuple(Not(q) for q in inner.parts)))
        if isinstance(inner, TrueDesc):
            return []
    raise StructuralError("unknown description node %r" % tree)


# -- rational witness search ---------------------------------------------

def rationals_by_height(max_height):
    """0, 1, -1, 1/2, -1/2, 2, -2, ... ordered by height max(|num|, den)."""
    yield Fraction(0)
    from math import gcd
    for h in range(1, max_height + 1):
        for num in range(1, h + 1):
            for den in range(1, h + 1):
                if max(num, den) != h or gcd(num, den) != 1:
                    continue
                yield Fraction(num, den)
                yield Fraction(-num, den)


def enumerate_points(desc, budget=20000, max_height=12):
    """Yield rational points satisfying `desc`, coordinates enumerated by
    ascending height, spending at most `budget` full-point evaluations.

    A partial assignment is pruned when some condition polynomial already
    evaluates to a violating constant.  Every yielded point has been
    verified by exact evaluation of the whole description.
    """
    n = desc.nvars
    if n == 0:
        if desc.holds_at([]):
            yield []
        return
    conds = desc.conditions()
    budget_left = [budget]
    candidates = list(rationals_by_height(max_height))

    def viable(assignment):
        for cond in conds:
            part = cond.poly.partial_eval(assignment)
            if part.is_constant():
                v = part.constant_value()
                ok = {">": v > 0, "<": v < 0, "=": v == 0}[cond.rel]
                if not ok:
                    return False
        return True

    def search(i, assignment):
        if i == n:
            budget_left[0] -= 1
            point = [assignment[k] for k in range(n)]
            if desc.holds_at(point):
                yield point
            return
        for val in candidates:
            if budget_left[0] <= 0:
                return
            assignment[i] = val
            if viable(assignment):
                yield from search(i + 1, assignment)
            del assignment[i]

    yield from search(0, {})


def find_witness_point(desc, avoid=(), budget=20000, max_height=12):
    """A rational point satisfying `desc` with every avoid-polynomial
    nonzero, or None when the bounded search exhausts its budget.
    Never returns an unverified point."""
    for point in enumerate_points(desc, budget=budget, max_height=max_height):
        if all(p.evaluate(point) != 0 for p in avoid):
            return point
    return None
