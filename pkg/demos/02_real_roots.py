"""The real-root oracle: Sturm chains, exact isolation, refinement, and
bounded rational witness search inside sign-condition sets.

Run:  python demos/02_real_roots.py
"""

from fractions import Fraction

from diffmod import Polynomial, Ring
from diffmod.realroots import (SemialgebraicDescription, atom, desc_and,
                               find_witness_point, isolate_real_roots,
                               refine_interval, sturm_sequence)

ring = Ring(("x",), "x")
parse = lambda s: Polynomial.parse(ring, s)

# The Sturm chain of x^3 - x: sign variations count distinct real roots.
p = parse("x^3 - x")
print("Sturm chain of x^3 - x:")
for link in sturm_sequence(p):
    print("   ", link.text())
print()

# Isolation reports rational roots exactly and irrational ones as intervals
# on which the square-free part changes sign.
for text in ("x^2 - x", "x^2 - 2", "x^2 + 1", "x^3 - 2*x^2 - x + 2"):
    q = parse(text)
    print("roots of %-22s" % text, [str(iv) for iv in isolate_real_roots(q)])
print()

# Any isolating interval refines below a requested width by bisection,
# preserving the sign change.
iv = [i for i in isolate_real_roots(parse("x^2 - 2")) if i.lower > 0][0]
narrow = refine_interval(parse("x^2 - 2"), iv, Fraction(1, 10 ** 9))
print("sqrt(2) to width 1e-9:", narrow)
print()

# Witness search: a verified rational point in a semialgebraic set,
# avoiding the zero sets of extra polynomials.
ring2 = Ring(("u", "v"), "xx")
u = Polynomial.variable(ring2, "u")
v = Polynomial.variable(ring2, "v")
desc = SemialgebraicDescription(
    desc_and(atom(u * u + v * v - 1, "<"), atom(u, ">")), 2)
point = find_witness_point(desc, avoid=[u - v])
print("point in the right half-disc off the diagonal:", point)
