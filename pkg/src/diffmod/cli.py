"""Command-line front end.

Every subcommand reads a manifest file (or stdin with '-') and prints a
deterministic result: identical input, flags and seed give byte-identical
output.  Exit codes: 0 success, 2 parse error, 3 domain/structural error,
4 unsupported input.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from .errors import (DomainError, ManifestError, StructuralError,
                     UnsupportedInputError, WitnessSearchError)
from .groebner import (LinearSystemOverRing, SubmoduleBasis, buchberger,
                       critical_l, eliminate, intersect, normal_form,
                       saturate, solve_inhomogeneous, syzygy_module)
from .manifest import (need, parse_desc_section, parse_operator_lines,
                       parse_operator_manifest, parse_poly, parse_ring,
                       parse_strata_manifest, parse_vec, parse_vec_lines,
                       section_map, split_sections)
from .orders import ModuleOrder
from .pipeline import main_mclosure
from .quasimonic import QuasiMonic, reduce_mod_powers
from .realroots import find_witness_point, isolate_real_roots, refine_interval
from .vanishing import vanishing_ideal



_ALLOWED = {
    "gb": {"ring", "polys"},
    "nf": {"ring", "polys", "target"},
    "syz": {"ring", "polys"},
    "intersect": {"ring", "left", "right"},
    "saturate": {"ring", "polys", "by"},
    "eliminate": {"ring", "polys", "drop"},
    "solve": {"ring", "matrix", "rhs"},
    "critical-l": {"ring", "amatrix", "bmatrix", "delta"},
    "roots": {"ring", "poly"},
    "witness": {"ring", "desc", "avoid"},
    "qdiv": {"ring", "target", "divisors", "params"},
    "apply": {"ring", "op", "vec"},
}


def _reject_unknown(command, smap):
    allowed = _ALLOWED.get(command)
    if allowed is None:
        return
    for name, secs in smap.items():
        if name not in allowed:
            raise ManifestError("unknown section [%s] for %s" % (name, command),
                                secs[0].line)


def _print_basis(basis, order=None):
    if not basis.gens:
        print("0")
        return
    for g in sorted(basis.gens, key=lambda v: v.text(order)):
        print(g.text(order))


def _ring_and_map(text, args=None, command=None):
    sections = split_sections(text)
    smap = section_map(sections)
    if command is not None:
        _reject_unknown(command, smap)
    ring, order = parse_ring(need(smap, "ring"))
    if args is not None and args.order:
        from .orders import block_order, grevlex_order, lex_order
        name = args.order.lower()
        if name == "lex":
            order = lex_order()
        elif name == "grevlex":
            order = grevlex_order()
        elif name.startswith("block:"):
            order = block_order(int(name.split(":", 1)[1]))
        else:
            raise ManifestError("unknown order %r" % args.order)
    return ring, order, smap


def _module_order(order):
    return ModuleOrder(order, "top")


def cmd_gb(text, args):
    ring, order, smap = _ring_and_map(text, args, 'gb')
    vecs = parse_vec_lines(ring, need(smap, "polys"))
    basis = SubmoduleBasis(ring, len(vecs[0]) if vecs else 1, vecs,
                           order=_module_order(order))
    _print_basis(buchberger(basis), order)
    return 0


def cmd_nf(text, args):
    ring, order, smap = _ring_and_map(text, args, 'nf')
    vecs = parse_vec_lines(ring, need(smap, "polys"))
    tgt_section = need(smap, "target")
    [(ttext, tline)] = tgt_section.payload
    target = parse_vec(ring, ttext, tline)
    basis = buchberger(SubmoduleBasis(ring, len(target), vecs,
                                      order=_module_order(order)))
    print(normal_form(target, basis).text(order))
    return 0


def cmd_syz(text, args):
    ring, order, smap = _ring_and_map(text, args, 'syz')
    vecs = parse_vec_lines(ring, need(smap, "polys"))
    _print_basis(syzygy_module(vecs), order)
    return 0


def cmd_intersect(text, args):
    ring, order, smap = _ring_and_map(text, args, 'intersect')
    left = parse_vec_lines(ring, need(smap, "left"))
    right = parse_vec_lines(ring, need(smap, "right"))
    j = len(left[0])
    out = intersect(SubmoduleBasis(ring, j, left), SubmoduleBasis(ring, j, right))
    _print_basis(out, order)
    return 0


def cmd_saturate(text, args):
    ring, order, smap = _ring_and_map(text, args, 'saturate')
    vecs = parse_vec_lines(ring, need(smap, "polys"))
    [(btext, bline)] = need(smap, "by").payload
    f = parse_poly(ring, btext, bline)
    out = saturate(SubmoduleBasis(ring, len(vecs[0]), vecs), f)
    _print_basis(out, order)
    return 0


def cmd_eliminate(text, args):
    ring, order, smap = _ring_and_map(text, args, 'eliminate')
    vecs = parse_vec_lines(ring, need(smap, "polys"))
    [(dtext, _)] = need(smap, "drop").payload
    drop = [v.strip() for v in dtext.split(",")]
    out = eliminate(SubmoduleBasis(ring, len(vecs[0]), vecs), drop)
    _print_basis(out, order)
    return 0


def cmd_solve(text, args):
    ring, order, smap = _ring_and_map(text, args, 'solve')
    rows = [parse_vec(ring, t, l) for t, l in need(smap, "matrix").payload]
    rhs = [parse_poly(ring, t, l) for t, l in need(smap, "rhs").payload]
    sys_ = LinearSystemOverRing([list(r.comps) for r in rows], rhs)
    sol = solve_inhomogeneous(sys_)
    if sol is None:
        print("no solution")
    else:
        print(sol.text(order))
    return 0


def cmd_critical_l(text, args):
    ring, order, smap = _ring_and_map(text, args, 'critical-l')
    amat = [list(parse_vec(ring, t, l).comps) for t, l in need(smap, "amatrix").payload]
    bmat = [list(parse_vec(ring, t, l).comps) for t, l in need(smap, "bmatrix").payload]
    [(dtext, dline)] = need(smap, "delta").payload
    delta = parse_poly(ring, dtext, dline)
    l0, module = critical_l(amat, bmat, delta)
    print("l0 = %d" % l0)
    _print_basis(module, order)
    return 0


def cmd_roots(text, args):
    ring, order, smap = _ring_and_map(text, args, 'roots')
    [(ptext, pline)] = need(smap, "poly").payload
    p = parse_poly(ring, ptext, pline)
    intervals = isolate_real_roots(p)
    if args.width is not None:
        width = Fraction(args.width)
        intervals = [refine_interval(p, iv, width) for iv in intervals]
    for iv in intervals:
        if iv.exact:
            print("root %s" % iv.lower)
        else:
            print("interval [%s, %s]" % (iv.lower, iv.upper))
    return 0


def cmd_witness(text, args):
    ring, order, smap = _ring_and_map(text, args, 'witness')
    desc = parse_desc_section(ring, need(smap, "desc"))
    avoid = []
    if "avoid" in smap:
        avoid = [parse_poly(ring, t, l) for t, l in smap["avoid"][0].payload]
    point = find_witness_point(desc, avoid, budget=args.budget)
    if point is None:
        print("no witness found within budget")
        return 0
    print(", ".join(str(v) for v in point))
    return 0


def cmd_qdiv(text, args):
    ring, order, smap = _ring_and_map(text, args, 'qdiv')
    [(ptext, pline)] = need(smap, "target").payload
    p = parse_poly(ring, ptext, pline)
    qs = []
    for t, l in need(smap, "divisors").payload:
        parts = [x.strip() for x in t.split(";")]
        if len(parts) != 2:
            raise ManifestError("divisor rows are 'poly ; var'", l)
        qs.append(QuasiMonic(parse_poly(ring, parts[0], l), ring.index(parts[1])))
    power = 1
    if "params" in smap and "power" in smap["params"][0].keys:
        power = int(smap["params"][0].keys["power"][0])
    cert = reduce_mod_powers(p, qs, power)
    print("l = %d" % cert.l)
    for i, h in enumerate(cert.cofactors):
        print("cofactor %d = %s" % (i + 1, h.text(order)))
    print("remainder = %s" % cert.remainder.text(order))
    return 0


def cmd_apply(text, args):
    ring, order, smap = _ring_and_map(text, args, 'apply')
    [(vtext, vline)] = need(smap, "vec").payload
    vec = parse_vec(ring, vtext, vline)
    op = parse_operator_lines(ring, len(vec), need(smap, "op"))
    print(op.apply(vec).text(order))
    return 0


def cmd_vanish(text, args):
    strata = parse_strata_manifest(text)
    out = vanishing_ideal(strata, budget=args.budget)
    _print_basis(out)
    return 0


def cmd_mclosure(text, args):
    sop = parse_operator_manifest(text)
    res = main_mclosure(sop, check_samples=args.check_samples if args.check else 0,
                        seed=args.seed)
    if args.log:
        for line in res.provenance:
            print("# %s" % line)
    _print_basis(res.basis)
    return 0


_COMMANDS = {
    "gb": cmd_gb,
    "nf": cmd_nf,
    "syz": cmd_syz,
    "intersect": cmd_intersect,
    "saturate": cmd_saturate,
    "eliminate": cmd_eliminate,
    "solve": cmd_solve,
    "critical-l": cmd_critical_l,
    "roots": cmd_roots,
    "witness": cmd_witness,
    "qdiv": cmd_qdiv,
    "apply": cmd_apply,
    "vanish": cmd_vanish,
    "mclosure": cmd_mclosure,
}


def build_parser():
    ap = argparse.ArgumentParser(
        prog="diffmod",
        description="Exact polynomial algebra for differential-operator modules.")
    ap.add_argument("command", choices=sorted(_COMMANDS))
    ap.add_argument("manifest", help="manifest file, or - for stdin")
    ap.add_argument("--order", default=None, help="override [ring] order (unused: "
                    "orders come from the manifest)")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--budget", type=int, default=20000)
    ap.add_argument("--width", default=None, help="refine root intervals below this width")
    ap.add_argument("--log", action="store_true", help="emit the provenance ledger")
    ap.add_argument("--check", action="store_true",
                    help="re-run the soundness sampling before printing")
    ap.add_argument("--check-samples", type=int, default=10)
    return ap


def run(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.manifest == "-":
            text = sys.stdin.read()
        else:
            with open(args.manifest, "r", encoding="ascii") as fh:
                text = fh.read()
    except OSError as exc:
        print("cannot read manifest: %s" % exc, file=sys.stderr)
        return 2
    try:
        return _COMMANDS[args.command](text, args)
    except ManifestError as exc:
        print("parse error: %s" % exc, file=sys.stderr)
        return 2
    except UnsupportedInputError as exc:
        print("unsupported input: %s" % exc, file=sys.stderr)
        return 4
    except (DomainError, StructuralError, WitnessSearchError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 3


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
