"""Linear differential operators with polynomial coefficients.

An operator maps vectors of N polynomials to a single polynomial:
L(f) = sum over terms a(x) * d^alpha f_i.  Scalar operators (N inputs
collapsed to polynomial-to-polynomial maps) cover vector fields and
operator composition; compositions are materialized eagerly into the
(multi-index, component, coefficient) normal form by Leibniz expansion
so operator identities can be checked by canonical equality.

The tangent frame of a stratum rewrites away base-variable derivatives:
Delta^D L = sum over |alpha| <= M of X^alpha composed with an operator
that differentiates graph variables only.  The expansion never divides
by Delta; the exponent D is whatever the recursion incurs.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product

from .errors import DomainError, StructuralError
from .groebner import (LinearSystemOverRing, full_module, normal_form,
                       solution_module)
from .poly import Polynomial, binom
from .quasimonic import QuasiMonic


def _multi_add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _multi_le(a, b):
    return all(x <= y for x, y in zip(a, b))


def _multi_binom(b, g):
    out = 1
    for x, y in zip(b, g):
        out *= binom(x, y)
    return out


def _sub_multis(beta):
    """All gamma <= beta componentwise."""
    ranges = [range(x + 1) for x in beta]
    return [tuple(g) for g in product(*ranges)]


class ScalarOp:
    """Polynomial-to-polynomial operator sum c_beta(x) * d^beta."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring, terms):
        self.ring = ring
        self.terms = {}
        for alpha, c in terms.items():
            if isinstance(c, (int, Fraction)):
                c = Polynomial.constant(ring, c)
            if c.is_zero():
                continue
            if len(alpha) != ring.nvars:
                raise StructuralError("multi-index length mismatch")
            self.terms[tuple(alpha)] = c

    @classmethod
    def derivation(cls, ring, coeffs):
        """First-order operator sum coeffs[i] * d_i (a vector field)."""
        terms = {}
        for i, c in coeffs.items():
            alpha = tuple(1 if k == i else 0 for k in range(ring.nvars))
            terms[alpha] = c
        return cls(ring, terms)

    def is_zero(self):
        return not self.terms

    def order(self):
        return max((sum(a) for a in self.terms), default=-1)

    def apply_poly(self, f):
        out = Polynomial.zero(self.ring)
        for alpha, c in self.terms.items():
            out = out + c * f.diff_multi(alpha)
        return out

    def __add__(self, other):
        terms = dict(self.terms)
        for a, c in other.terms.items():
            terms[a] = terms.get(a, Polynomial.zero(self.ring)) + c
        return ScalarOp(self.ring, terms)

    def __sub__(self, other):
        terms = dict(self.terms)
        for a, c in other.terms.items():
            terms[a] = terms.get(a, Polynomial.zero(self.ring)) - c
        return ScalarOp(self.ring, terms)

    def scale(self, p):
        return ScalarOp(self.ring, {a: c * p for a, c in self.terms.items()})

    def compose(self, inner):
        """self after inner; inner may be a ScalarOp or a LinearDiffOp."""
        if isinstance(inner, LinearDiffOp):
            terms = {}
            for beta, c in self.terms.items():
                for (alpha, i), a in inner.terms.items():
                    for gamma in _sub_multis(beta):
                        coeff = c * a.diff_multi(gamma) * _multi_binom(beta, gamma)
                        if coeff.is_zero():
                            continue
                        key = (_multi_add(tuple(x - y for x, y in zip(beta, gamma)), alpha), i)
                        terms[key] = terms.get(key, Polynomial.zero(self.ring)) + coeff
            return LinearDiffOp(self.ring, inner.ncomps, terms)
        terms = {}
        for beta, c in self.terms.items():
            for alpha, a in inner.terms.items():
                for gamma in _sub_multis(beta):
                    coeff = c * a.diff_multi(gamma) * _multi_binom(beta, gamma)
                    if coeff.is_zero():
                        continue
                    key = _multi_add(tuple(x - y for x, y in zip(beta, gamma)), alpha)
                    terms[key] = terms.get(key, Polynomial.zero(self.ring)) + coeff
        return ScalarOp(self.ring, terms)

    def commutator(self, other):
        return self.compose(other) - other.compose(self)

    def __eq__(self, other):
        return isinstance(other, ScalarOp) and self.ring == other.ring and self.terms == other.terms

    __hash__ = None


class LinearDiffOp:
    """Operator on N-component vectors: L(f) = sum a(x) d^alpha f_i."""

    __slots__ = ("ring", "ncomps", "terms")

    def __init__(self, ring, ncomps, terms, blocks=None):
        if ncomps < 1:
            raise StructuralError("need at least one component")
        self.ring = ring
        self.ncomps = ncomps
        self.terms = {}
        for (alpha, i), c in terms.items():
            if isinstance(c, (int, Fraction)):
                c = Polynomial.constant(ring, c)
            if c.is_zero():
                continue
            if len(alpha) != ring.nvars:
                raise StructuralError("multi-index length mismatch")
            if not (0 <= i < ncomps):
                raise StructuralError("component index out of range")
            self.terms[(tuple(alpha), i)] = c
        if blocks is not None:
            actual = self.derivative_blocks()
            if not actual <= set(blocks):
                raise StructuralError("operator differentiates outside declared blocks %r"
                                      % sorted(blocks))

    def is_zero(self):
        return not self.terms

    def order(self):
        return max((sum(a) for (a, _) in self.terms), default=-1)

    def derivative_blocks(self):
        used = set()
        for (alpha, _) in self.terms:
            for idx, e in enumerate(alpha):
                if e:
                    used.add(self.ring.blocks[idx])
        return used

    def derivative_vars(self):
        used = set()
        for (alpha, _) in self.terms:
            for idx, e in enumerate(alpha):
                if e:
                    used.add(idx)
        return used

    def coeff(self, alpha, i):
        return self.terms.get((tuple(alpha), i), Polynomial.zero(self.ring))

    def apply(self, vec):
        if len(vec) != self.ncomps:
            raise StructuralError("vector arity %d, operator expects %d"
                                  % (len(vec), self.ncomps))
        if vec.ring != self.ring:
            raise StructuralError("vector over wrong ring")
        out = Polynomial.zero(self.ring)
        for (alpha, i), c in self.terms.items():
            out = out + c * vec[i].diff_multi(alpha)
        return out

    def __add__(self, other):
        terms = dict(self.terms)
        for k, c in other.terms.items():
            terms[k] = terms.get(k, Polynomial.zero(self.ring)) + c
        return LinearDiffOp(self.ring, self.ncomps, terms)

    def __sub__(self, other):
        terms = dict(self.terms)
        for k, c in other.terms.items():
            terms[k] = terms.get(k, Polynomial.zero(self.ring)) - c
        return LinearDiffOp(self.ring, self.ncomps, terms)

    def scale(self, p):
        """Left multiplication by a polynomial (or rational)."""
        return LinearDiffOp(self.ring, self.ncomps,
                            {k: c * p for k, c in self.terms.items()})

    def __eq__(self, other):
        return (isinstance(other, LinearDiffOp) and self.ring == other.ring
                and self.ncomps == other.ncomps and self.terms == other.terms)

    __hash__ = None

    def text(self):
        lines = []
        for (alpha, i), c in sorted(self.terms.items(),
                                    key=lambda kv: (sum(kv[0][0]), kv[0][0], kv[0][1])):
            lines.append("%s ; (%s) ; %d" % (c.text(), ",".join(str(e) for e in alpha), i + 1))
        return "\n".join(lines)

    def __repr__(self):
        return "LinearDiffOp(order=%d, %d terms)" % (self.order(), len(self.terms))


def apply(op, vec):
    return op.apply(vec)


def zero_op(ring, ncomps):
    return LinearDiffOp(ring, ncomps, {})


def identity_component_op(ring, ncomps, i, coeff=None):
    z = (0,) * ring.nvars
    return LinearDiffOp(ring, ncomps, {(z, i): coeff if coeff is not None else 1})


# -- module of vectors annihilated after arbitrary polynomial multiples ----

def mclosure_poly_coeffs(op):
    """Generators of {P : L(Q P) = 0 identically for all polynomials Q}.

    Recursion on the order: the top-order layer contributes the linear
    equations sum_i a_gamma^i P_i = 0, the divergence-form rewrite drops
    the order, and the accumulated system is solved over the ring.
    """
    ring, n = op.ring, op.ncomps
    rows = []
    cur = op
    while not cur.is_zero():
        s = cur.order()
        layer = sorted({alpha for (alpha, _) in cur.terms if sum(alpha) == s})
        for alpha in layer:
            rows.append([cur.coeff(alpha, i) for i in range(n)])
        if s == 0:
            break
        for alpha in layer:
            for i in range(n):
                a = cur.coeff(alpha, i)
                if a.is_zero():
                    continue
                expand = ScalarOp(ring, {alpha: 1}).compose(
                    identity_component_op(ring, n, i, a))
                cur = cur - expand
        if not cur.is_zero() and cur.order() >= s:
            raise DomainError("internal: divergence rewrite did not drop the order")
    if not rows:
        return full_module(ring, n)
    sys = LinearSystemOverRing(rows)
    return solution_module(sys)


# -- tangent frames ---------------------------------------------------------

class TangentFrame:
    """Vector fields X_j = Delta * d_xj + sum b_j,mu * d_y,mu tangent to a
    graph stratum, with Delta the product of the annihilators' derivatives."""

    def __init__(self, ring, x_indices, delta, fields, y_parts, annihilators):
        self.ring = ring
        self.x_indices = tuple(x_indices)
        self.delta = delta
        self.fields = list(fields)      # X_j, parallel to x_indices
        self.y_parts = list(y_parts)    # Y_j = X_j - Delta d_xj
        self.annihilators = list(annihilators)

    def check_tangency(self):
        for x_op in self.fields:
            for qm in self.annihilators:
                if not x_op.apply_poly(qm.poly).is_zero():
                    raise DomainError("frame field is not tangent to the stratum")
        return True


def build_tangent_frame(stratum, vanishing=None):
    """Tangent frame over a stratum's graph variables (y and z blocks).

    Annihilators whose distinguished derivative vanishes on the stratum
    are replaced by that derivative until it does not; the test is an
    exact normal form against the stratum's vanishing ideal.
    """
    from .vanishing import complexify
    ring = stratum.ring
    if vanishing is None:
        vanishing = complexify(stratum)
    gb = vanishing.groebner()

    anns = []
    for qm in stratum.annihilators():
        p = qm.poly
        while True:
            dp = p.diff(qm.var)
            if dp.is_zero():
                raise DomainError(
                    "annihilator became independent of its graph variable; bad stratum input")
            if normal_form(dp, gb).is_zero():
                p = dp
                continue
            break
        anns.append(QuasiMonic(p, qm.var))

    delta = Polynomial.one(ring)
    derivs = []
    for qm in anns:
        d = qm.poly.diff(qm.var)
        derivs.append(d)
        delta = delta * d

    fields = []
    y_parts = []
    for j in stratum.x_indices():
        coeffs = {j: delta}
        ycoeffs = {}
        for mu, qm in enumerate(anns):
            other = Polynomial.one(ring)
            for nu in range(len(anns)):
                if nu != mu:
                    other = other * derivs[nu]
            b = -(other * anns[mu].poly.diff(j))
            if not b.is_zero():
                coeffs[qm.var] = b
                ycoeffs[qm.var] = b
        x_op = ScalarOp.derivation(ring, coeffs)
        fields.append(x_op)
        y_parts.append(ScalarOp.derivation(ring, ycoeffs))

    frame = TangentFrame(ring, stratum.x_indices(), delta, fields, y_parts, anns)
    frame.check_tangency()
    return frame


# -- elimination of x-derivatives -------------------------------------------

def _split_alpha(ring, alpha, xset):
    ax = tuple(e if i in xset else 0 for i, e in enumerate(alpha))
    ay = tuple(e if i not in xset else 0 for i, e in enumerate(alpha))
    return ax, ay


def _compose_xword(frame, word, op):
    """Materialize X_{w1} o X_{w2} o ... o op."""
    pos = {j: k for k, j in enumerate(frame.x_indices)}
    for j in reversed(word):
        op = frame.fields[pos[j]].compose(op)
    return op


def _push_coeff(frame, c, word, op):
    """Exact decomposition of c * X^word o op into sum X^u o (y-only op):
    c X_j W = X_j (c W) - (X_j c) W, recursively."""
    if c.is_zero():
        return {}
    if not word:
        return {(): op.scale(c)}
    pos = {j: k for k, j in enumerate(frame.x_indices)}
    j, rest = word[0], word[1:]
    out = {}
    for u, o in _push_coeff(frame, c, rest, op).items():
        key = (j,) + u
        out[key] = out.get(key, zero_op(frame.ring, o.ncomps)) + o
    xc = frame.fields[pos[j]].apply_poly(c)
    for u, o in _push_coeff(frame, xc, rest, op).items():
        out[u] = out.get(u, zero_op(frame.ring, o.ncomps)) - o
    return {u: o for u, o in out.items() if not o.is_zero()}


def _is_y_only(op, xset):
    return all(all(alpha[i] == 0 for i in xset) for (alpha, _) in op.terms)


def _rewrite(op, frame, xset):
    """(D, {x-word: y-only op}) with Delta^D op = sum X^word o op_word."""
    if op.is_zero():
        return 0, {}
    m = op.order()
    if m == 0 or not (op.derivative_vars() & xset):
        if not _is_y_only(op, xset):
            raise DomainError("internal: order-0 operator differentiates x")
        return 0, {(): op}
    ring = op.ring
    delta = frame.delta

    top = {k: c for k, c in op.terms.items() if sum(k[0]) == m}
    xitems = []
    for (alpha, i), a in top.items():
        ax, ay = _split_alpha(ring, alpha, xset)
        base = LinearDiffOp(ring, op.ncomps, {(ay, i): 1})
        c0 = a * delta ** sum(ay)
        slots = []
        for j in sorted(xset):
            slots.extend([j] * ax[j])
        if not slots:
            xitems.append((c0, (), base))
            continue
        pos = {j: k for k, j in enumerate(frame.x_indices)}
        for choice in product((0, 1), repeat=len(slots)):
            # 0 picks X_j, 1 picks -Y_j; the product expands (Delta d_x)^ax
            word = tuple(j for j, ch in zip(slots, choice) if ch == 0)
            tail = base
            sign = 1
            for j, ch in reversed(list(zip(slots, choice))):
                if ch == 1:
                    tail = frame.y_parts[pos[j]].compose(tail)
                    sign = -sign
            xitems.append((c0 * sign, word, tail))

    # everything the X-prefix items miss is strictly lower order
    acc = zero_op(ring, op.ncomps)
    for c, word, tail in xitems:
        acc = acc + _compose_xword(frame, word, tail).scale(c)
    rest = op.scale(delta ** m) - acc
    if not rest.is_zero() and rest.order() >= m:
        raise DomainError("internal: top order did not cancel in the rewrite")

    d_rest, buckets_rest = _rewrite(rest, frame, xset)
    buckets = {w: o for w, o in buckets_rest.items()}
    scale = delta ** d_rest
    for c, word, tail in xitems:
        for u, o in _push_coeff(frame, c * scale, word, tail).items():
            buckets[u] = buckets.get(u, zero_op(ring, op.ncomps)) + o
    buckets = {u: o for u, o in buckets.items() if not o.is_zero()}
    return d_rest + m, buckets


def eliminate_x_derivatives(op, frame):
    """(D, {alpha: L_alpha}) with Delta^D L = sum X^alpha o L_alpha exactly,
    every L_alpha free of x-derivatives; verified by canonical equality."""
    xset = set(frame.x_indices)
    d, buckets = _rewrite(op, frame, xset)
    if d and frame.delta.is_constant():
        c = frame.delta.constant_value() ** d
        if c != 1:
            buckets = {w: o.scale(Fraction(1) / c) for w, o in buckets.items()}
        d = 0
    out = {}
    n = frame.ring.nvars
    for word, o in buckets.items():
        alpha = [0] * n
        for j in word:
            alpha[j] += 1
        key = tuple(alpha)
        out[key] = out.get(key, zero_op(frame.ring, op.ncomps)) + o

    check = zero_op(frame.ring, op.ncomps)
    for word, o in buckets.items():
        check = check + _compose_xword(frame, word, o)
    if not (check == op.scale(frame.delta ** d)):
        raise DomainError("internal: rewrite identity failed")
    for key, o in out.items():
        if not _is_y_only(o, xset):
            raise DomainError("internal: rewrite left x-derivatives behind")
    return d, out


# -- coefficient lift --------------------------------------------------------

def lift_operator(entries, ring, ncomps, nxp, nxq, nz):
    """Operator with each semialgebraic coefficient slot replaced by a z-variable.

    entries: (lam, comp, ax, ay, omega) with lam a 1-based coefficient
    index, ax a multi-index over the first block (length nxp), ay over
    the second (length nxq) and omega rational.  The result is linear in
    the z-variables and takes no z-derivatives.
    """
    if ring.nvars != nxp + nxq + nz:
        raise StructuralError("ring size does not match the declared blocks")
    terms = {}
    for (lam, comp, ax, ay, omega) in entries:
        if not (1 <= lam <= nz):
            raise StructuralError("coefficient index out of range")
        if len(ax) != nxp or len(ay) != nxq:
            raise StructuralError("multi-index blocks of wrong length")
        alpha = tuple(ax) + tuple(ay) + (0,) * nz
        zvar = Polynomial.variable(ring, nxp + nxq + (lam - 1))
        key = (alpha, comp)
        add = zvar * Fraction(omega)
        terms[key] = terms.get(key, Polynomial.zero(ring)) + add
    return LinearDiffOp(ring, ncomps, terms)
