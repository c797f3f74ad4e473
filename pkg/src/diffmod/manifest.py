"""Line-oriented text manifests for the command-line tool.

A manifest is a sequence of `[section]` headers followed by `key = value`
lines and bare payload lines.  Unknown sections and malformed lines are
rejected with their line number.  The polynomial syntax is the canonical
text form of the engine, e.g. ``x1^2 - 1/2*z1*y1^2``.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import ManifestError, StructuralError
from .orders import block_order, grevlex_order, lex_order
from .pipeline import OperatorStratum, StratifiedOperator
from .poly import Polynomial, PolyVec, Ring
from .realroots import (And, Atom, Or, SemialgebraicDescription, SignCondition,
                        TrueDesc)
from .vanishing import Stratum


def _parse_fraction(text, line):
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise ManifestError("bad rational %r" % text, line) from None


class Section:
    def __init__(self, name, line):
        self.name = name
        self.line = line
        self.keys = {}       # key -> (value, line)
        self.payload = []    # (text, line)


# sections whose lines are `key = value`; all others carry raw payload lines
_KEYED = {"ring", "stratum", "operator", "params"}


def split_sections(text):
    sections = []
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            if not line.endswith("]"):
                raise ManifestError("unterminated section header", lineno)
            current = Section(line[1:-1].strip().lower(), lineno)
            sections.append(current)
            continue
        if current is None:
            raise ManifestError("content before any [section]", lineno)
        if current.name in _KEYED:
            if "=" not in line:
                raise ManifestError("expected 'key = value'", lineno)
            key, value = (part.strip() for part in line.split("=", 1))
            key = " ".join(key.lower().split())
            if key in current.keys:
                raise ManifestError("duplicate key %r" % key, lineno)
            current.keys[key] = (value, lineno)
        else:
            current.payload.append((line, lineno))
    return sections


def _names_from(value, line):
    value = value.strip()
    if not value:
        return []
    return [v.strip() for v in value.split(",") if v.strip()]


def parse_ring(section):
    xs = _names_from(*section.keys.get("x", ("", section.line)))
    ys = _names_from(*section.keys.get("y", ("", section.line)))
    zs = _names_from(*section.keys.get("z", ("", section.line)))
    if not (xs or ys or zs):
        raise ManifestError("ring with no variables", section.line)
    try:
        ring = Ring(tuple(xs + ys + zs), "x" * len(xs) + "y" * len(ys) + "z" * len(zs))
    except StructuralError as exc:
        raise ManifestError(str(exc), section.line) from None
    order = grevlex_order()
    if "order" in section.keys:
        text, line = section.keys["order"]
        text = text.strip().lower()
        if text == "lex":
            order = lex_order()
        elif text == "grevlex":
            order = grevlex_order()
        elif text.startswith("block:"):
            try:
                order = block_order(int(text.split(":", 1)[1]))
            except ValueError:
                raise ManifestError("bad block order split", line) from None
        else:
            raise ManifestError("unknown order %r" % text, line)
    return ring, order


def parse_poly(ring, text, line):
    try:
        return Polynomial.parse(ring, text)
    except StructuralError as exc:
        raise ManifestError(str(exc), line) from None


def parse_vec(ring, text, line):
    return PolyVec([parse_poly(ring, part, line) for part in text.split(";")])


def parse_vec_lines(ring, section):
    return [parse_vec(ring, text, line) for text, line in section.payload]


def _parse_atom(ring, text, line):
    for rel in (">", "<", "="):
        if rel in text:
            left, right = text.split(rel, 1)
            if right.strip() != "0":
                raise ManifestError("sign conditions compare against 0", line)
            try:
                return SignCondition(parse_poly(ring, left, line), rel)
            except StructuralError as exc:
                raise ManifestError(str(exc), line) from None
    raise ManifestError("no relation in %r" % text, line)


def parse_desc_line(ring, text, line):
    """One conjunction of atoms, '&&'-separated; the word 'true' is allowed."""
    text = text.strip()
    if text.lower() == "true":
        return TrueDesc()
    parts = [p.strip() for p in text.split("&&")]
    atoms = tuple(Atom(_parse_atom(ring, p, line)) for p in parts)
    return atoms[0] if len(atoms) == 1 else And(atoms)


def parse_desc_section(ring, section):
    lines = [parse_desc_line(ring, text, line) for text, line in section.payload]
    if not lines:
        raise ManifestError("empty description", section.line)
    tree = lines[0] if len(lines) == 1 else Or(tuple(lines))
    return SemialgebraicDescription(tree, ring.nvars)


def _parse_matrix(value, line):
    rows = []
    for chunk in value.split(";"):
        row = [_parse_fraction(v, line) for v in chunk.split(",")]
        rows.append(row)
    return rows


def parse_stratum(section, nz_expected=None, ambient_map=False):
    def intval(key, default=None):
        if key not in section.keys:
            if default is None:
                raise ManifestError("stratum needs %s" % key, section.line)
            return default
        value, line = section.keys[key]
        try:
            return int(value)
        except ValueError:
            raise ManifestError("bad integer for %s" % key, line) from None

    n = intval("n")
    m = intval("m")
    p = intval("p", 0)
    if nz_expected is not None and p != nz_expected:
        raise ManifestError("stratum p must equal the coefficient count",
                            section.line)
    ring = Ring.make(nx=n, ny=m, nz=p)
    ring_x = Ring.make(nx=n)

    u_desc = None
    if "u" in section.keys:
        value, line = section.keys["u"]
        tree = parse_desc_line(ring_x, value, line)
        u_desc = SemialgebraicDescription(tree, n)

    anns_y = [None] * m
    anns_z = [None] * p
    for key in section.keys:
        for prefix, target in (("anny ", anns_y), ("annz ", anns_z)):
            if key.startswith(prefix):
                value, line = section.keys[key]
                try:
                    idx = int(key.split()[1])
                except (ValueError, IndexError):
                    raise ManifestError("bad annihilator key %r" % key, line) from None
                if not (1 <= idx <= len(target)):
                    raise ManifestError("annihilator index out of range", line)
                target[idx - 1] = parse_poly(ring, value, line)
    if any(a is None for a in anns_y):
        raise ManifestError("missing anny entries", section.line)
    if any(a is None for a in anns_z):
        raise ManifestError("missing annz entries", section.line)

    witness = None
    if "witness" in section.keys:
        value, line = section.keys["witness"]
        witness = [_parse_fraction(v, line) for v in value.split(",")]

    tmat = None
    if "t" in section.keys:
        value, line = section.keys["t"]
        tmat = _parse_matrix(value, line)

    try:
        if ambient_map:
            st = Stratum(n=n, m=m, p=p, ring=ring, u_desc=u_desc,
                         anns_y=anns_y, anns_z=anns_z, witness=witness, T=None)
            return st, tmat
        return Stratum(n=n, m=m, p=p, ring=ring, u_desc=u_desc,
                       anns_y=anns_y, anns_z=anns_z, witness=witness, T=tmat)
    except StructuralError as exc:
        raise ManifestError("bad stratum: %s" % exc, section.line) from None


def parse_strata_manifest(text):
    sections = split_sections(text)
    strata = []
    for sec in sections:
        if sec.name != "stratum":
            raise ManifestError("unexpected section [%s]" % sec.name, sec.line)
        strata.append(parse_stratum(sec))
    if not strata:
        raise ManifestError("no strata", 1)
    return strata


def _parse_multi(text, line, length):
    text = text.strip()
    if not text.startswith("(") or not text.endswith(")"):
        raise ManifestError("multi-index must be parenthesized", line)
    inner = text[1:-1].strip()
    parts = [p.strip() for p in inner.split(",")] if inner else []
    try:
        multi = tuple(int(p) for p in parts if p != "")
    except ValueError:
        raise ManifestError("bad multi-index %r" % text, line) from None
    if len(multi) != length:
        raise ManifestError("multi-index of length %d, expected %d"
                            % (len(multi), length), line)
    return multi


def parse_coeff_entries(section, n_local, m_local, k):
    entries = []
    for text, line in section.payload:
        parts = [p.strip() for p in text.split(";")]
        if len(parts) != 5:
            raise ManifestError("coefficient rows are 'lam ; comp ; ax ; ay ; omega'",
                                line)
        try:
            lam = int(parts[0])
            comp = int(parts[1])
        except ValueError:
            raise ManifestError("bad index in coefficient row", line) from None
        ax = _parse_multi(parts[2], line, n_local)
        ay = _parse_multi(parts[3], line, m_local)
        omega = _parse_fraction(parts[4], line)
        if not (1 <= lam <= k):
            raise ManifestError("coefficient slot out of range", line)
        entries.append((lam, comp - 1, ax, ay, omega))
    if not entries:
        raise ManifestError("empty coefficient table", section.line)
    return entries


def parse_operator_manifest(text):
    sections = split_sections(text)
    if not sections or sections[0].name != "operator":
        raise ManifestError("operator manifests start with [operator]", 1)
    head = sections[0]

    def intval(key):
        if key not in head.keys:
            raise ManifestError("operator needs %s" % key, head.line)
        value, line = head.keys[key]
        try:
            return int(value)
        except ValueError:
            raise ManifestError("bad integer for %s" % key, line) from None

    n = intval("n")
    j = intval("j")
    k = intval("k")
    strata = []
    idx = 1
    while idx < len(sections):
        sec = sections[idx]
        if sec.name != "stratum":
            raise ManifestError("expected [stratum], got [%s]" % sec.name, sec.line)
        st, tmat = parse_stratum(sec, nz_expected=k, ambient_map=True)
        idx += 1
        if idx >= len(sections) or sections[idx].name != "coeffs":
            raise ManifestError("each stratum needs a [coeffs] section",
                                sec.line)
        entries = parse_coeff_entries(sections[idx], st.n, st.m, k)
        idx += 1
        try:
            strata.append(OperatorStratum(st, entries, tmat))
        except StructuralError as exc:
            raise ManifestError(str(exc), sec.line) from None
    try:
        return StratifiedOperator(n=n, j=j, k=k, strata=strata)
    except StructuralError as exc:
        raise ManifestError(str(exc), sections[0].line) from None


def parse_operator_lines(ring, ncomps, section):
    """Operator rows 'coeff ; (alpha) ; component' (component is 1-based)."""
    from .operators import LinearDiffOp
    terms = {}
    for text, line in section.payload:
        parts = [p.strip() for p in text.split(";")]
        if len(parts) != 3:
            raise ManifestError("operator rows are 'coeff ; (alpha) ; comp'", line)
        coeff = parse_poly(ring, parts[0], line)
        alpha = _parse_multi(parts[1], line, ring.nvars)
        try:
            comp = int(parts[2]) - 1
        except ValueError:
            raise ManifestError("bad component", line) from None
        key = (alpha, comp)
        prev = terms.get(key)
        terms[key] = coeff if prev is None else prev + coeff
    try:
        return LinearDiffOp(ring, ncomps, terms)
    except StructuralError as exc:
        raise ManifestError(str(exc), section.line) from None


def section_map(sections):
    out = {}
    for sec in sections:
        out.setdefault(sec.name, []).append(sec)
    return out


def need(smap, name, count=1):
    if name not in smap or len(smap[name]) != count:
        raise ManifestError("manifest needs exactly %d [%s] section(s)"
                            % (count, name), 1)
    return smap[name][0] if count == 1 else smap[name]
