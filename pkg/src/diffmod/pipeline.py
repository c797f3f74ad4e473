"""Solution modules of differential constraints on graph strata.

Stage I:  operators differentiating graph variables only.  Membership
reduces, through division by annihilator powers and cofactor degree
reduction, to solvability of a finite linear system over the base ring
with degree-bounded unknowns; the critical-exponent search turns the
"for some power of Delta" quantifier into a fixed exponent, and the
stage finishes with a second critical-exponent computation whose
solution module's leading components generate the answer.

Stage II: operators differentiating y and z blocks; produces the
z-independent solutions over the (x, y)-ring from stage I's generators
by a z-degree-bounded solvability system.

Stage IV: arbitrary polynomial-coefficient operators; the tangent frame
rewrites away x-derivatives, stage II handles each rewritten piece, and
the results intersect.

Main: a stratified semialgebraic operator, given per stratum by a
rational coefficient table over lifted coefficient slots; each stratum
contributes a module through stage IV and a linear pullback, and the
final module is the intersection over the strata.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from .errors import DomainError, StructuralError
from .groebner import (SubmoduleBasis, buchberger, critical_l, full_module,
                       intersect, normal_form)
from .operators import (build_tangent_frame, eliminate_x_derivatives,
                        lift_operator)
from .poly import Polynomial, PolyVec, Ring, linear_change_of_vars
from .vanishing import Stratum, complexify


@dataclass
class ModuleResult:
    basis: SubmoduleBasis
    provenance: list = field(default_factory=list)

    def log(self, key, value):
        self.provenance.append("%s=%s" % (key, value))


def _note(logs, key, value):
    logs.append("%s=%s" % (key, value))


def _split_by_vars(p, idxs):
    """Expand p as sum over monomials in the idxs-variables with coefficients
    free of them: {sub-mono (full length): coefficient polynomial}."""
    idxs = tuple(idxs)
    out = {}
    n = p.ring.nvars
    for m, c in p.terms.items():
        sub = tuple(m[i] if i in idxs else 0 for i in range(n))
        rest = tuple(0 if i in idxs else m[i] for i in range(n))
        bucket = out.setdefault(sub, {})
        bucket[rest] = bucket.get(rest, Fraction(0)) + c
    return {sub: Polynomial(p.ring, terms) for sub, terms in out.items()}


def _restrict(p, small, mapping):
    """Reinterpret p in a smaller ring; all other variables must be absent."""
    terms = {}
    for m, c in p.terms.items():
        mono = [0] * small.nvars
        for i, e in enumerate(m):
            if not e:
                continue
            if i not in mapping:
                raise StructuralError("polynomial sticks out of the subring")
            mono[mapping[i]] = e
        terms[tuple(mono)] = c
    return Polynomial(small, terms)


def _box_monomials(ring, bounds):
    """Full-length monomials with var exponent < bounds[var], zero elsewhere."""
    vars_ = sorted(bounds)
    ranges = [range(bounds[v]) for v in vars_]
    out = []
    for combo in product(*ranges):
        m = [0] * ring.nvars
        for v, e in zip(vars_, combo):
            m[v] = e
        out.append(tuple(m))
    return out


def _total_monomials(ring, idxs, maxdeg):
    """Full-length monomials over idxs with total degree <= maxdeg."""
    idxs = list(idxs)
    out = []

    def rec(pos, left, acc):
        if pos == len(idxs):
            m = [0] * ring.nvars
            for v, e in zip(idxs, acc):
                m[v] = e
            out.append(tuple(m))
            return
        for e in range(left + 1):
            rec(pos + 1, left - e, acc + [e])

    if maxdeg < 0:
        return []
    rec(0, maxdeg, [])
    return out


def _graph_degree(p, idxs):
    return p.degree_in_vars(idxs)


def _solution_from_final_system(ring, j, anns, power, delta, pk_vecs, logs):
    """Critical-exponent search for Delta^l P = sum H_mu ann_mu^power + sum G_k P_k;
    returns the module of admissible P."""
    rows = j
    a_cols = []
    for qm in anns:
        pw = qm.poly ** power
        for comp in range(j):
            a_cols.append(PolyVec([pw if r == comp else Polynomial.zero(ring)
                                   for r in range(rows)]))
    for v in pk_vecs:
        a_cols.append(v)
    a_matrix = [[col[r] for col in a_cols] for r in range(rows)] if a_cols else \
        [[] for _ in range(rows)]
    b_matrix = [[Polynomial.one(ring) if r == c else Polynomial.zero(ring)
                 for c in range(j)] for r in range(rows)]
    l1, module = critical_l(a_matrix, b_matrix, delta)
    _note(logs, "final_l", l1)
    return module


def graph_solution_module(stratum, op, vanishing=None, logs=None):
    """Generators of {P : op(Q P) = 0 on the stratum for all Q}, over the
    stratum's full local ring.  op must differentiate graph variables only."""
    logs = logs if logs is not None else []
    ring = stratum.ring
    j = op.ncomps
    gidx = stratum.graph_indices()
    if op.derivative_vars() - set(gidx):
        raise StructuralError("operator differentiates base variables")
    if op.is_zero():
        _note(logs, "stage1", "zero-operator")
        return full_module(ring, j)

    if vanishing is None:
        vanishing = complexify(stratum)
    svecs = [g[0] for g in vanishing.groebner().gens]

    anns = stratum.annihilators()
    m_ord = max(op.order(), 0)
    power = m_ord + 1
    delta = Polynomial.one(ring)
    for qm in anns:
        delta = delta * qm.lead

    ring_x = Ring.make(nx=stratum.n)
    xmap = {i: i for i in range(stratum.n)}

    # degree data
    d1_box = {qm.var: power * qm.deg for qm in anns}
    _note(logs, "D1_box", sorted(d1_box.values()))
    basis1 = _box_monomials(ring, d1_box)
    gammas = _total_monomials(ring, gidx, m_ord)

    d2_box = {qm.var: qm.deg for qm in anns}
    basis2 = _box_monomials(ring, d2_box)
    _note(logs, "D2_box", sorted(d2_box.values()))

    # realized degree of every combination the cofactor bound must cover
    lhs_cache = {}
    d3 = max((qm.deg for qm in anns), default=0)
    for gamma in gammas:
        for delta_m in basis1:
            for comp in range(j):
                mono = tuple(a + b for a, b in zip(gamma, delta_m))
                vec = PolyVec([Polynomial.monomial(ring, mono) if c == comp
                               else Polynomial.zero(ring) for c in range(j)])
                val = op.apply(vec)
                lhs_cache[(gamma, delta_m, comp)] = val
                if not val.is_zero():
                    d3 = max(d3, _graph_degree(val, gidx))
    max_s_deg = max((_graph_degree(s, gidx) for s in svecs), default=0)
    box2_total = sum(b - 1 for b in d2_box.values())
    d3 = max(d3, box2_total + max_s_deg)
    _note(logs, "D3", d3)
    d4 = {qm.var: d3 - qm.deg for qm in anns}
    _note(logs, "D4", sorted(d4.values()))

    # assemble the bounded linear system over the base ring
    bcols = [(comp, delta_m) for comp in range(j) for delta_m in basis1]
    acols = []
    for gamma in gammas:
        for snum, s in enumerate(svecs):
            for mono in basis2:
                acols.append(("S", gamma, snum, mono))
        for qnum, qm in enumerate(anns):
            for mono in _total_monomials(ring, gidx, d4[qm.var]):
                acols.append(("P", gamma, qnum, mono))

    rows = {}

    def row_entry(gamma, poly, colkind, colkey):
        for sub, coeff in _split_by_vars(poly, gidx).items():
            key = (gamma, sub)
            rows.setdefault(key, {})[colkey] = \
                rows.get(key, {}).get(colkey, Polynomial.zero(ring)) + coeff

    for gamma in gammas:
        for ci, (comp, delta_m) in enumerate(bcols):
            val = lhs_cache[(gamma, delta_m, comp)]
            if not val.is_zero():
                row_entry(gamma, val, "B", ("B", ci))
    for ci, col in enumerate(acols):
        kind, gamma, idx, mono = col
        base = svecs[idx] if kind == "S" else anns[idx].poly
        val = base * Polynomial.monomial(ring, mono)
        row_entry(gamma, val, "A", ("A", ci))

    row_keys = sorted(rows)
    a_matrix = []
    b_matrix = []
    for key in row_keys:
        bucket = rows[key]
        b_matrix.append([_restrict(bucket.get(("B", ci), Polynomial.zero(ring)), ring_x, xmap)
                         for ci in range(len(bcols))])
        a_matrix.append([_restrict(bucket.get(("A", ci), Polynomial.zero(ring)), ring_x, xmap)
                         for ci in range(len(acols))])
    if not row_keys:
        # no constraints at all: every degree-bounded candidate works
        pk_vecs = [PolyVec([Polynomial.monomial(ring, dm) if c == comp
                            else Polynomial.zero(ring) for c in range(j)])
                   for comp, dm in bcols]
        _note(logs, "stage1_l", 0)
        return _solution_from_final_system(ring, j, anns, power, delta, pk_vecs, logs)

    delta_x = _restrict(delta, ring_x, xmap)
    l0, coeff_module = critical_l(a_matrix, b_matrix, delta_x)
    _note(logs, "stage1_l", l0)
    _note(logs, "stage1_coeff_gens", len(coeff_module.gens))

    pk_vecs = []
    for gen in coeff_module.gens:
        comps = [Polynomial.zero(ring) for _ in range(j)]
        for ci, (comp, delta_m) in enumerate(bcols):
            c = gen[ci].lift(ring, xmap)
            if not c.is_zero():
                comps[comp] = comps[comp] + c * Polynomial.monomial(ring, delta_m)
        vec = PolyVec(comps)
        if not vec.is_zero():
            pk_vecs.append(vec)

    module = _solution_from_final_system(ring, j, anns, power, delta, pk_vecs, logs)
    _note(logs, "stage1_gens", len(module.gens))
    return module


def algorithm_I(stratum, op, vanishing=None):
    """Stage I as a public operation: strata without a z-block."""
    if stratum.p != 0:
        raise StructuralError("stage I expects a stratum without z-block")
    logs = []
    basis = graph_solution_module(stratum, op, vanishing, logs)
    return ModuleResult(basis, logs)


def _zfree_solution_module(stratum, op, vanishing=None, logs=None):
    """Generators over the (x, y)-ring of the z-independent part of the
    stage-I module; equals stage I itself when the stratum has no z-block."""
    logs = logs if logs is not None else []
    ring = stratum.ring
    j = op.ncomps
    ring_xy = Ring.make(nx=stratum.n, ny=stratum.m)
    xymap = {i: i for i in range(stratum.n + stratum.m)}

    inner = graph_solution_module(stratum, op, vanishing, logs)
    if stratum.p == 0:
        gens = [PolyVec([_restrict(p, ring_xy, xymap) for p in g.comps])
                for g in inner.gens]
        return SubmoduleBasis(ring_xy, j, gens)

    pk = list(inner.gens)
    zidx = tuple(range(stratum.n + stratum.m, ring.nvars))
    zanns = stratum.annihilators()[stratum.m:]
    m_ord = max(op.order(), 0)
    power = m_ord + 1
    delta_hat = Polynomial.one(ring)
    for qm in zanns:
        delta_hat = delta_hat * qm.lead

    if not pk:
        _note(logs, "stage2", "inner-module-zero")
        return SubmoduleBasis(ring_xy, j, [])

    zbox = {qm.var: power * qm.deg for qm in zanns}
    _note(logs, "stage2_zbox", sorted(zbox.values()))
    abasis = _box_monomials(ring, zbox)
    box_total = sum(b - 1 for b in zbox.values())
    d2 = max((box_total + max(_graph_degree(p, zidx) for p in v.comps)
              for v in pk), default=0)
    d2 = max(d2, max(power * qm.deg for qm in zanns))
    _note(logs, "stage2_D2", d2)
    hbound = {qm.var: d2 - power * qm.deg for qm in zanns}

    acols = []
    for knum in range(len(pk)):
        for mono in abasis:
            acols.append(("P", knum, None, mono))
    for lnum, qm in enumerate(zanns):
        for comp in range(j):
            for mono in _total_monomials(ring, zidx, hbound[qm.var]):
                acols.append(("H", lnum, comp, mono))

    rows = {}

    def add_entries(colkey, comp, poly):
        for sub, coeff in _split_by_vars(poly, zidx).items():
            key = (comp, sub)
            bucket = rows.setdefault(key, {})
            bucket[colkey] = bucket.get(colkey, Polynomial.zero(ring)) + coeff

    for ci, col in enumerate(acols):
        kind, idx, comp, mono = col
        mult = Polynomial.monomial(ring, mono)
        if kind == "P":
            for c in range(j):
                val = pk[idx][c] * mult
                if not val.is_zero():
                    add_entries(("A", ci), c, val)
        else:
            val = (zanns[idx].poly ** power) * mult
            add_entries(("A", ci), comp, val)

    zero_mono = (0,) * ring.nvars
    for c in range(j):
        rows.setdefault((c, zero_mono), {})

    row_keys = sorted(rows)
    a_matrix = []
    b_matrix = []
    for (comp, sub) in row_keys:
        bucket = rows[(comp, sub)]
        a_matrix.append([_restrict(bucket.get(("A", ci), Polynomial.zero(ring)),
                                   ring_xy, xymap) for ci in range(len(acols))])
        b_matrix.append([Polynomial.one(ring_xy)
                         if (sub == zero_mono and comp == c) else Polynomial.zero(ring_xy)
                         for c in range(j)])

    delta_xy = _restrict(delta_hat, ring_xy, xymap)
    l0, module = critical_l(a_matrix, b_matrix, delta_xy)
    _note(logs, "stage2_l", l0)
    _note(logs, "stage2_gens", len(module.gens))
    return module


def algorithm_II(stratum, op, vanishing=None):
    """Stage II as a public operation: strata with a z-block, operators
    differentiating the y and z blocks only."""
    if stratum.p < 1:
        raise StructuralError("stage II expects a z-block")
    logs = []
    basis = _zfree_solution_module(stratum, op, vanishing, logs)
    return ModuleResult(basis, logs)


def algorithm_IV(stratum, op, vanishing=None):
    """Polynomial-coefficient operators over one stratum: rewrite away the
    x-derivatives, run stage II on every piece, intersect."""
    logs = []
    ring = stratum.ring
    j = op.ncomps
    ring_xy = Ring.make(nx=stratum.n, ny=stratum.m)
    if op.is_zero():
        return ModuleResult(full_module(ring_xy, j), ["stage4=zero-operator"])
    if vanishing is None:
        vanishing = complexify(stratum)
    frame = build_tangent_frame(stratum, vanishing)
    d, family = eliminate_x_derivatives(op, frame)
    _note(logs, "rewrite_D", d)
    _note(logs, "rewrite_pieces", len(family))
    result = None
    for alpha in sorted(family):
        piece = family[alpha]
        _note(logs, "piece", "".join(str(a) for a in alpha))
        mod = _zfree_solution_module(stratum, piece, vanishing, logs)
        result = mod if result is None else intersect(result, mod)
        _note(logs, "intersect_gens", len(result.gens))
    if result is None:
        result = full_module(ring_xy, j)
    return ModuleResult(result, logs)


# -- stratified operators and the main algorithm ------------------------------

@dataclass
class OperatorStratum:
    """One stratum of a stratified operator: local graph data, the rational
    coefficient table, and the ambient linear map (identity when None)."""

    stratum: Stratum
    entries: list            # (lam, comp, ax, ay, omega)
    t_ambient: list = None   # n x n rational matrix, ambient -> local

    def __post_init__(self):
        if self.stratum.T is not None:
            raise StructuralError("pipeline strata carry their map in t_ambient")
        n = self.stratum.n + self.stratum.m
        if self.t_ambient is not None:
            self.t_ambient = [[Fraction(v) for v in row] for row in self.t_ambient]
            if len(self.t_ambient) != n or any(len(r) != n for r in self.t_ambient):
                raise StructuralError("ambient map has wrong shape")


@dataclass
class StratifiedOperator:
    n: int                   # ambient dimension
    j: int                   # vector length
    k: int                   # number of lifted coefficient slots
    strata: list             # of OperatorStratum

    def __post_init__(self):
        for os in self.strata:
            st = os.stratum
            if st.n + st.m != self.n:
                raise StructuralError("stratum does not fit the ambient dimension")
            if st.p != self.k:
                raise StructuralError("stratum z-block must match the coefficient count")


def main_mclosure(sop, check_samples=0, seed=0):
    """Generators of the module of polynomial vectors P with L(Q P) = 0 on
    all of ambient space for every polynomial Q, for the stratified
    semialgebraic operator L described by `sop`."""
    amb = Ring.make(nx=sop.n)
    logs = []
    result = None
    for snum, os in enumerate(sop.strata):
        st = os.stratum
        _note(logs, "stratum", snum)
        op = lift_operator(os.entries, st.ring, sop.j, st.n, st.m, st.p)
        vanishing = complexify(st)
        part = algorithm_IV(st, op, vanishing)
        logs.extend("s%d.%s" % (snum, line) for line in part.provenance)
        if check_samples:
            check_on_stratum(st, op, part.basis, vanishing,
                             nsamples=check_samples, seed=seed + snum)
        gens = []
        for g in part.basis.gens:
            comps = []
            for p in g.comps:
                q = p.lift(amb, {i: i for i in range(sop.n)})
                if os.t_ambient is not None:
                    q = linear_change_of_vars(q, os.t_ambient)
                comps.append(q)
            gens.append(PolyVec(comps))
        contrib = SubmoduleBasis(amb, sop.j, gens)
        _note(logs, "stratum_gens", len(contrib.gens))
        result = contrib if result is None else intersect(result, contrib)
        _note(logs, "running_gens", len(result.gens))
    if result is None:
        result = full_module(amb, sop.j)
    if result.gens:
        result = buchberger(result)
    return ModuleResult(result, logs)


def intersect_operator_modules(results):
    """Intersection of per-operator modules, provenance concatenated."""
    if not results:
        raise StructuralError("nothing to intersect")
    basis = results[0].basis
    logs = list(results[0].provenance)
    for r in results[1:]:
        basis = intersect(basis, r.basis)
        logs.extend(r.provenance)
    return ModuleResult(basis, logs)


# -- soundness sampling ---------------------------------------------------------

def random_polynomial_over(rng, ring, deg, height=4, nterms=4):
    terms = {}
    for _ in range(nterms):
        mono = [0] * ring.nvars
        for _ in range(rng.randint(0, deg)):
            mono[rng.randrange(ring.nvars)] += 1
        c = Fraction(rng.randint(-height, height), rng.randint(1, height))
        if c:
            terms[tuple(mono)] = terms.get(tuple(mono), Fraction(0)) + c
    return Polynomial(ring, {m: c for m, c in terms.items() if c})


def check_on_stratum(stratum, op, basis, vanishing=None, nsamples=20, seed=0):
    """Exact soundness check: for every generator P and sampled Q, the value
    op(Q P) reduces to zero against the stratum's vanishing ideal."""
    ring = stratum.ring
    if vanishing is None:
        vanishing = complexify(stratum)
    gb = vanishing.groebner()
    rng = random.Random(seed)
    deg = max(op.order(), 0) + 2
    lift_map = {i: i for i in range(stratum.n + stratum.m)}
    for g in basis.gens:
        if g.ring.nvars != ring.nvars:
            g = PolyVec([p.lift(ring, lift_map) for p in g.comps])
        for _ in range(nsamples):
            q = random_polynomial_over(rng, ring, deg)
            val = op.apply(g.scale(q))
            if not normal_form(val, gb).is_zero():
                raise DomainError("soundness sampling failed: generator is not "
                                  "annihilated on the stratum")
    return True
