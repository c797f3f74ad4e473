"""Division with remainder by powers of quasi-monic polynomials.

A quasi-monic polynomial has the shape a(x) * w^D + lower w-degree
terms, where w is a single distinguished variable and a(x) is a nonzero
polynomial in the base variables.  Division by its powers is
pseudo-division: every elimination step multiplies through by the
leading coefficient, the incurred exponents are normalized to a single
power of Delta = prod a_mu at the end, and every certificate is
verified by exact re-expansion before being returned.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError, StructuralError
from .poly import Polynomial


def coeff_in_var(p, var, k):
    """Coefficient of var^k in p, as a polynomial not involving var."""
    terms = {}
    for m, c in p.terms.items():
        if m[var] == k:
            m2 = m[:var] + (0,) + m[var + 1:]
            terms[m2] = terms.get(m2, Fraction(0)) + c
    return Polynomial(p.ring, terms)


@dataclass(frozen=True)
class QuasiMonic:
    """a(x) * w^D + (lower w-degree terms), a nonzero, D >= 1."""

    poly: Polynomial
    var: int

    def __post_init__(self):
        if self.poly.is_zero():
            raise StructuralError("quasi-monic polynomial must be nonzero")
        if self.poly.degree_in(self.var) < 1:
            raise StructuralError("polynomial does not involve its distinguished variable")

    @property
    def deg(self):
        return self.poly.degree_in(self.var)

    @property
    def lead(self):
        return coeff_in_var(self.poly, self.var, self.deg)

    @classmethod
    def from_poly(cls, poly, var):
        return cls(poly, var if isinstance(var, int) else poly.ring.index(var))


def delta_of(qs, ring=None):
    """Product of the leading coefficients."""
    if not qs:
        if ring is None:
            raise StructuralError("need a ring for an empty product")
        return Polynomial.one(ring)
    d = Polynomial.one(qs[0].poly.ring)
    for q in qs:
        d = d * q.lead
    return d


def degree_bound(ds, k):
    """Aggregate remainder degree bound sum(k*D_mu - 1) for k-th power division."""
    if k < 1:
        raise StructuralError("power must be positive")
    return sum(k * d - 1 for d in ds)


@dataclass
class DivisionCertificate:
    """Delta^l * P = sum_mu cofactor_mu * qm_mu^power + remainder, exactly."""

    l: int
    cofactors: list
    remainder: Polynomial
    power: int
    bounds: dict  # distinguished var -> strict remainder bound

    def verify(self, p, qs, delta):
        lhs = (delta ** self.l) * p
        rhs = self.remainder
        for h, q in zip(self.cofactors, qs):
            rhs = rhs + h * (q.poly ** self.power)
        if lhs != rhs:
            raise DomainError("division certificate identity failed")
        for q in qs:
            if self.remainder.degree_in(q.var) >= self.power * q.deg:
                raise DomainError("remainder degree bound violated")
        return True


def _pseudo_divide_power(p, qm, k):
    """lead^e * p = h * qm.poly^k + r with deg_var(r) < k*deg; lead = a^k."""
    ring = p.ring
    var = qm.var
    divisor = qm.poly ** k
    dd = k * qm.deg
    lead = qm.lead ** k
    h = Polynomial.zero(ring)
    r = p
    e = 0
    while True:
        d = r.degree_in(var)
        if d < dd:
            return e, h, r
        c = coeff_in_var(r, var, d)
        shift = Polynomial.monomial(
            ring, tuple(d - dd if i == var else 0 for i in range(ring.nvars)))
        h = h * lead + c * shift
        r = r * lead - c * shift * divisor
        e += 1


def reduce_mod_powers(p, qs, k):
    """Verified certificate Delta^l * p = sum H_mu * qm_mu^k + remainder,
    with per-variable remainder bounds deg_{w_mu}(remainder) < k * D_mu."""
    if k < 1:
        raise StructuralError("power must be positive")
    ring = p.ring
    dist = set()
    for q in qs:
        if q.var in dist:
            raise StructuralError("duplicate distinguished variable")
        dist.add(q.var)
    for q in qs:
        if q.lead.vars_used() & dist:
            raise StructuralError("leading coefficient involves a distinguished variable")
    delta = delta_of(qs, ring)

    cof = [Polynomial.zero(ring) for _ in qs]
    exps = [0] * len(qs)
    r = p
    for i, q in enumerate(qs):
        e, h, r = _pseudo_divide_power(r, q, k)
        if e:
            factor = q.lead ** (e * k)
            for j in range(i):
                cof[j] = cof[j] * factor
        cof[i] = h
        exps[i] = e * k

    l = max(exps, default=0)
    fill = Polynomial.one(ring)
    for q, e in zip(qs, exps):
        if l - e:
            fill = fill * q.lead ** (l - e)
    if not (fill == Polynomial.one(ring)):
        cof = [h * fill for h in cof]
        r = r * fill

    # drop unnecessary Delta powers incurred by pseudo-division steps that
    # turned out to divide exactly
    from .groebner import poly_exact_div
    while l > 0:
        try:
            cof2 = [poly_exact_div(h, delta) if not h.is_zero() else h for h in cof]
            r2 = poly_exact_div(r, delta) if not r.is_zero() else r
        except DomainError:
            break
        cof, r, l = cof2, r2, l - 1

    cert = DivisionCertificate(l=l, cofactors=cof, remainder=r, power=k,
                               bounds={q.var: k * q.deg for q in qs})
    cert.verify(p, qs, delta)
    return cert


def reduce_cofactor_degrees(hs, qs, dcap):
    """Rewrite sum H_mu * qm_mu with cofactors of bounded total degree.

    Input: the combination sum H_mu * qm_mu must have degree <= dcap in
    the distinguished variables, with dcap >= max D_mu.  Output (l, H#)
    with Delta^l * sum H_mu qm_mu = sum H#_mu qm_mu exactly and
    deg_dist(H#_mu) <= dcap - D_mu for every mu.  Each round cancels the
    top homogeneous layer with Koszul-relation corrections, costing one
    factor of Delta when the leading coefficients are non-constant.
    """
    if len(hs) != len(qs):
        raise StructuralError("cofactor/divisor count mismatch")
    if not qs:
        return 0, []
    ring = qs[0].poly.ring
    dvars = [q.var for q in qs]
    if len(set(dvars)) != len(dvars):
        raise StructuralError("duplicate distinguished variable")
    combo = Polynomial.zero(ring)
    for h, q in zip(hs, qs):
        combo = combo + h * q.poly
    if combo.degree_in_vars(dvars) > dcap:
        raise DomainError("combination exceeds the stated degree bound")
    if dcap < max(q.deg for q in qs):
        raise DomainError("degree cap below max divisor degree")
    delta = delta_of(qs, ring)

    def dist_deg(p):
        return p.degree_in_vars(dvars)

    hs = list(hs)
    l = 0
    while True:
        m = max((q.deg + dist_deg(h) for h, q in zip(hs, qs) if not h.is_zero()),
                default=-1)
        if m <= dcap:
            break
        tops = []
        for h, q in zip(hs, qs):
            # homogeneous layer of h of distinguished-degree exactly m - q.deg
            want = m - q.deg
            layer = Polynomial(ring, {mm: c for mm, c in h.terms.items()
                                      if sum(mm[v] for v in dvars) == want})
            tops.append(layer)
        # collect, per top multi-index gamma (over dvars, |gamma| = m), the
        # dvars-parts of a_mu * top_mu at gamma - D_mu * e_mu; they sum to 0
        corrections = [Polynomial.zero(ring) for _ in qs]
        slots = {}
        for i, (q, layer) in enumerate(zip(qs, tops)):
            ai = q.lead
            contrib = ai * layer
            for mm, c in contrib.terms.items():
                gamma = list(mm[v] for v in dvars)
                gamma[dvars.index(q.var)] += q.deg
                base = tuple(mm[v] if v not in dvars else 0 for v in range(ring.nvars))
                key = tuple(gamma)
                slots.setdefault(key, {}).setdefault(i, {})
                slot = slots[key][i]
                slot[base] = slot.get(base, Fraction(0)) + c
        for gamma, per_i in slots.items():
            idxs = sorted(per_i)
            amounts = [Polynomial(ring, per_i[i]) for i in idxs]
            # greedy transfer: lambda for the pair (idxs[t], idxs[t+1]) is the
            # running prefix sum; prefix sums telescope back to each amount
            prefix = Polynomial.zero(ring)
            for t in range(len(idxs) - 1):
                prefix = prefix + amounts[t]
                if prefix.is_zero():
                    continue
                i, j = idxs[t], idxs[t + 1]
                qi, qj = qs[i], qs[j]
                expo = list(gamma)
                expo[dvars.index(qi.var)] -= qi.deg
                expo[dvars.index(qj.var)] -= qj.deg
                if min(expo) < 0:
                    raise DomainError("internal: negative correction exponent")
                mono = [0] * ring.nvars
                for v, e in zip(dvars, expo):
                    mono[v] = e
                scale = Polynomial.one(ring)
                for t2, q2 in enumerate(qs):
                    if t2 != i and t2 != j:
                        scale = scale * q2.lead
                core = prefix * scale * Polynomial.monomial(ring, tuple(mono))
                corrections[i] = corrections[i] + core * qj.poly
                corrections[j] = corrections[j] - core * qi.poly
        new_hs = [h * delta - corr for h, corr in zip(hs, corrections)]
        new_m = max((q.deg + dist_deg(h) for h, q in zip(new_hs, qs) if not h.is_zero()),
                    default=-1)
        if new_m >= m:
            raise DomainError("internal: top cancellation failed")
        hs = new_hs
        if not delta.is_constant():
            l += 1
        # constant Delta is absorbed into the cofactors instead
        if delta.is_constant() and delta.constant_value() != 1:
            inv = 1 / delta.constant_value()
            hs = [h * inv for h in hs]

    # exact verification
    lhs = (delta ** l) * combo
    rhs = Polynomial.zero(ring)
    for h, q in zip(hs, qs):
        rhs = rhs + h * q.poly
    if lhs != rhs:
        raise DomainError("cofactor reduction identity failed")
    for h, q in zip(hs, qs):
        if not h.is_zero() and dist_deg(h) > dcap - q.deg:
            raise DomainError("cofactor degree bound violated")
    return l, hs
