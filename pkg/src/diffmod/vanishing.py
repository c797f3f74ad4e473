"""Vanishing ideals of stratified semialgebraic sets.

A stratum is a graph {(x, G(x)) : x in U} described by sign conditions
on the base block, one quasi-monic annihilator per graph coordinate, an
optional rational witness on the graph, and an optional linear change
of coordinates into the ambient space.  Complexification selects the
unique irreducible component of the annihilators' zero set through the
witness; polynomials vanish on the stratum exactly when they vanish on
that component, so its ideal is the stratum's vanishing ideal.  The
ideal of a union of strata is the intersection over the strata.

Component selection factors each annihilator over Q and keeps the
factors vanishing at the witness, saturated by their leading
coefficients.  With a rational witness and independent differentials
the chosen factors are absolutely irreducible; when more than one of
them is nonlinear in its graph variable the combination can still split
into several components, and such inputs are rejected rather than
mishandled.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import sympy

from .errors import (DomainError, StructuralError, UnsupportedInputError,
                     WitnessSearchError)
from .groebner import SubmoduleBasis, buchberger, ideal, intersect, saturate
from .poly import Polynomial, Ring, linear_change_of_vars, mat_det
from .quasimonic import QuasiMonic
from .realroots import (SemialgebraicDescription, TrueDesc, enumerate_points,
                        isolate_real_roots, to_dnf)


# -- sympy conversion (used for factorization only) ------------------------

def _to_sympy(p, syms):
    expr = sympy.Integer(0)
    for m, c in p.terms.items():
        term = sympy.Rational(c.numerator, c.denominator)
        for s, e in zip(syms, m):
            if e:
                term *= s ** e
        expr += term
    return expr


def _from_sympy(expr, ring, syms):
    poly = sympy.Poly(expr, *syms)
    terms = {}
    for mono, coeff in poly.terms():
        q = sympy.Rational(coeff)
        terms[tuple(mono)] = Fraction(int(q.p), int(q.q))
    return Polynomial(ring, terms)


def factor_rational(p):
    """Irreducible factors of p over Q as (factor, multiplicity) pairs."""
    syms = [sympy.Symbol(n) for n in p.ring.names]
    _, factors = sympy.factor_list(_to_sympy(p, syms))
    return [(_from_sympy(f, p.ring, syms), int(k)) for f, k in factors]


# -- strata -----------------------------------------------------------------

@dataclass
class TriangularSystem:
    """Polynomials each univariate in its own distinguished variable over the base."""

    ring: Ring
    members: list  # of QuasiMonic

    def __post_init__(self):
        seen = set()
        for qm in self.members:
            if qm.poly.ring != self.ring:
                raise StructuralError("triangular member over wrong ring")
            if qm.var in seen:
                raise StructuralError("duplicate distinguished variable")
            seen.add(qm.var)


@dataclass
class Stratum:
    """Graph stratum in local coordinates (x-block, y-block, z-block).

    T maps ambient coordinates to local ones; the ambient stratum is the
    preimage of the local graph.  Connectedness of U and analyticity of
    the graph map are trusted; everything machine-checkable (annihilator
    shape, witness membership, invertibility of T) is verified.
    """

    n: int
    m: int
    p: int
    u_desc: SemialgebraicDescription = None
    anns_y: list = field(default_factory=list)   # Polynomials in (x, y_mu)
    anns_z: list = field(default_factory=list)   # Polynomials in (x, z_lam)
    witness: list = None
    T: list = None
    ring: Ring = None

    def __post_init__(self):
        if self.ring is None:
            self.ring = Ring.make(nx=self.n, ny=self.m, nz=self.p)
        q = self.n + self.m + self.p
        if self.ring.nvars != q:
            raise StructuralError("ring does not match stratum dimensions")
        if len(self.anns_y) != self.m or len(self.anns_z) != self.p:
            raise StructuralError("one annihilator per graph coordinate required")
        if self.u_desc is None:
            self.u_desc = SemialgebraicDescription(TrueDesc(), self.n)
        if self.u_desc.nvars != self.n:
            raise StructuralError("U-description dimension mismatch")
        ybase = self.n
        zbase = self.n + self.m
        for mu, p_ in enumerate(self.anns_y):
            self._check_ann(p_, ybase + mu)
        for lam, p_ in enumerate(self.anns_z):
            self._check_ann(p_, zbase + lam)
        if self.witness is not None:
            self.witness = [Fraction(w) for w in self.witness]
            if len(self.witness) != q:
                raise StructuralError("witness has wrong length")
            if not self.u_desc.holds_at(self.witness[:self.n]):
                raise DomainError("witness violates the base sign conditions")
            for p_ in self.anns_y + self.anns_z:
                if p_.evaluate(self.witness) != 0:
                    raise DomainError("witness does not lie on an annihilator")
        if self.T is not None:
            self.T = [[Fraction(v) for v in row] for row in self.T]
            if len(self.T) != q or any(len(r) != q for r in self.T):
                raise StructuralError("T has wrong shape")
            if mat_det(self.T) == 0:
                raise DomainError("T is singular")

    def _check_ann(self, p_, var):
        if p_.ring != self.ring:
            raise StructuralError("annihilator over wrong ring")
        if p_.is_zero():
            raise StructuralError("zero annihilator")
        if p_.degree_in(var) < 1:
            raise StructuralError("annihilator does not involve its graph variable")
        graph_vars = set(range(self.n, self.ring.nvars))
        extra = (p_.vars_used() & graph_vars) - {var}
        if extra:
            raise StructuralError("annihilator couples several graph variables")

    def x_indices(self):
        return tuple(range(self.n))

    def graph_indices(self):
        return tuple(range(self.n, self.n + self.m + self.p))

    def annihilators(self):
        out = []
        for mu, p_ in enumerate(self.anns_y):
            out.append(QuasiMonic(p_, self.n + mu))
        for lam, p_ in enumerate(self.anns_z):
            out.append(QuasiMonic(p_, self.n + self.m + lam))
        return out

    def triangular_system(self):
        return TriangularSystem(self.ring, self.annihilators())


# -- the trivial annihilating-polynomial routine -----------------------------

def annihilating_polynomial(desc):
    """A nonzero polynomial vanishing on the function graph described by desc.

    desc must decompose into sign-condition cells each carrying at least
    one equation; the product of one chosen equation per cell vanishes
    on the whole set.  A cell with no equation would be open, which a
    function graph cannot be.
    """
    cells = to_dnf(desc.tree)
    if not cells:
        raise DomainError("description denotes the empty set")
    chosen = []
    for cell in cells:
        eqs = [c.poly for c in cell if c.rel == "="]
        if not eqs:
            raise DomainError("a cell has no equation; the set has interior "
                              "and cannot be a function graph")
        chosen.append(eqs[0])
    out = chosen[0]
    for p_ in chosen[1:]:
        out = out * p_
    if out.is_zero():
        raise DomainError("annihilating product vanished")
    return out


# -- component selection ------------------------------------------------------

def select_component(system, witness):
    """Prime ideal of the unique irreducible component of the triangular
    system's zero set through the witness.

    Requires the differentials at the witness to be independent (for a
    triangular system: each annihilator's distinguished derivative must
    not vanish there) and the leading coefficients to be nonzero at the
    witness.  At most one chosen factor may be nonlinear in its graph
    variable; richer inputs can split into several components over the
    complex numbers and are rejected.
    """
    ring = system.ring
    witness = [Fraction(w) for w in witness]
    chosen = []
    for qm in system.members:
        if qm.poly.evaluate(witness) != 0:
            raise DomainError("witness does not lie on the system")
        if qm.poly.diff(qm.var).evaluate(witness) == 0:
            raise UnsupportedInputError(
                "differentials at the witness are dependent; apply derivative "
                "preprocessing or move the witness")
        hits = []
        for f, mult in factor_rational(qm.poly):
            if f.degree() < 1:
                continue
            if f.evaluate(witness) == 0:
                hits.append((f, mult))
        if len(hits) != 1 or hits[0][1] != 1:
            raise UnsupportedInputError(
                "witness sits on several factors; differentials cannot be "
                "independent there")
        factor = hits[0][0]
        if factor.degree_in(qm.var) < 1:
            raise UnsupportedInputError("chosen factor lost its graph variable")
        chosen.append(QuasiMonic(factor, qm.var))

    nonlinear = [qm for qm in chosen if qm.deg > 1]
    if len(nonlinear) > 1:
        raise UnsupportedInputError(
            "several nonlinear graph coordinates: the component through the "
            "witness may not be cut out by the chosen factors")

    lead_prod = Polynomial.one(ring)
    for qm in chosen:
        lead_prod = lead_prod * qm.lead
    if lead_prod.evaluate(witness) == 0:
        raise UnsupportedInputError("leading coefficient vanishes at the witness")

    basis = ideal(ring, [qm.poly for qm in chosen])
    if not lead_prod.is_constant():
        basis = saturate(basis, lead_prod)
    return buchberger(basis)


# -- witness search for strata -------------------------------------------------

def _stratum_witness(stratum, budget=20000, tries=200):
    """Find (x0, graph values) with nonzero annihilator derivatives, or fail.

    Only unambiguous strata are searched: every annihilator must have a
    single real root over the candidate base point and that root must be
    rational; then the graph values are forced.  Anything else needs a
    caller-supplied witness.
    """
    anns = stratum.annihilators()
    tried = 0
    for base in enumerate_points(stratum.u_desc, budget=budget):
        tried += 1
        if tried > tries:
            break
        values = {i: v for i, v in enumerate(base)}
        ok = True
        for qm in anns:
            uni = qm.poly.partial_eval(values)
            if uni.is_zero() or uni.degree_in(qm.var) < 1:
                ok = False
                break
            roots = isolate_real_roots(uni)
            if len(roots) != 1 or not roots[0].exact:
                ok = False
                break
            values[qm.var] = roots[0].lower
        if not ok:
            continue
        point = [values.get(i, Fraction(0)) for i in range(stratum.ring.nvars)]
        if all(qm.poly.evaluate(point) == 0 and
               qm.poly.diff(qm.var).evaluate(point) != 0 and
               (qm.lead.is_constant() or qm.lead.evaluate(point) != 0)
               for qm in anns):
            return point
    raise WitnessSearchError(
        "bounded witness search failed; supply a witness on the stratum")


def preprocess_annihilators(stratum, witness):
    """Replace annihilators by their distinguished derivatives while those
    derivatives vanish at the witness, keeping the triangular shape."""
    out = []
    for qm in stratum.annihilators():
        p_ = qm.poly
        while p_.diff(qm.var).evaluate(witness) == 0:
            p_ = p_.diff(qm.var)
            if p_.degree_in(qm.var) < 1:
                raise DomainError(
                    "annihilator degenerated to a base polynomial at the witness; "
                    "the witness cannot be generic on the stratum")
            if p_.evaluate(witness) != 0:
                raise DomainError("derivative preprocessing left the witness; "
                                  "the witness cannot be generic on the stratum")
        out.append(QuasiMonic(p_, qm.var))
    return out


# -- complexification -----------------------------------------------------------

def complexify(stratum, budget=20000):
    """Generators of the ideal of all polynomials vanishing on the stratum."""
    ring = stratum.ring
    if stratum.m + stratum.p == 0:
        return SubmoduleBasis(ring, 1, [])
    witness = stratum.witness
    if witness is None:
        witness = _stratum_witness(stratum, budget=budget)
    anns = preprocess_annihilators(stratum, witness)
    system = TriangularSystem(ring, anns)
    return select_component(system, witness)


def vanishing_ideal(strata, ambient_ring=None, budget=20000):
    """Ideal of polynomials vanishing on a union of strata: the intersection
    of the per-stratum ideals, each pulled back through its coordinate map."""
    if not strata:
        raise StructuralError("no strata given")
    q = strata[0].ring.nvars
    for s in strata:
        if s.ring.nvars != q:
            raise StructuralError("strata live in different ambient dimensions")
    ring = ambient_ring or Ring.make(nx=q)

    result = None
    for s in strata:
        local = complexify(s, budget=budget)
        gens = []
        for g in local.gens:
            p_ = g[0].lift(ring, {i: i for i in range(q)})
            if s.T is not None:
                p_ = linear_change_of_vars(p_, s.T)
            gens.append(p_)
        contrib = ideal(ring, gens)
        result = contrib if result is None else intersect(result, contrib)
    return buchberger(result) if result.gens else result
