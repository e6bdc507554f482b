"""Hard Lefschetz and Hodge-Riemann for a coinvariant algebra.

The coinvariant algebra of I2(5) lives over Q(2cos(pi/5)), so every rank
and signature below is computed in that field, not in floating point.

Run with:  python3 demos/coinvariant_lefschetz.py
"""
from coxhodge.coxeter import CoxeterSystem
from coxhodge.demazure import coinvariant_algebra
from coxhodge.lefschetz import (
    check_hard_lefschetz,
    check_hodge_riemann,
    from_frobenius,
    primitive_decomposition,
    sl2_triple,
)
from coxhodge.numfield import format_element

W = CoxeterSystem.from_type("I2(5)")
C = coinvariant_algebra(W)
print("graded dims (doubled degrees):", C.algebra.graded_dims())
print("invariant generators in degrees", [g.degree for g in C.generators])

D = from_frobenius(C, "I2(5)")
gamma = D.ample[0]
print("gamma =", [format_element(c) for c in gamma])

hl = check_hard_lefschetz(D, gamma)
print("hard Lefschetz:", hl.passed, {i: r for i, r in hl.ranks.items()})
print("primitive dims:", primitive_decomposition(D, gamma).dims())

hr = check_hodge_riemann(D, gamma)
for i, b in sorted(hr.blocks.items(), reverse=True):
    print(f"  P^-{i}: expected sign {b['expected']:+d}, signature {b['signature']}")
print("Hodge-Riemann:", hr.passed)

t = sl2_triple(D, gamma)
print("sl2: unique", t.unique, "commutators", t.commutators_ok, "P = ker f", t.lowest_weight_ok)

# flip the sign of the trace and the certificate catches it
bad = check_hodge_riemann(from_frobenius(C.scaled(-1)), gamma)
print("with negated trace:", bad.passed)
