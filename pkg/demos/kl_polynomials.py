"""Kazhdan-Lusztig polynomials, inverse polynomials and structure constants.

Run with:  python3 demos/kl_polynomials.py
"""
from coxhodge.coxeter import CoxeterSystem
from coxhodge.hecke import KLTable, check_positivity, mu_structure, quantum_decompose

# S4 is the Coxeter group of type A3; elements are printed by their
# ShortLex reduced word in the generators s1, s2, s3.
W = CoxeterSystem.from_type("A3")
T = KLTable(W)
print(W, "has", T.n, "elements")

# all KL polynomials of S4 that are not a single monomial
for x in T.elements:
    for y in T.elements:
        p = T.p(y, x)
        if len(p.terms) > 1:
            print(f"p[{y}, {x}] = {p}")

# b_x b_y in the KL basis, with each coefficient written in quantum numbers
x, y = W.element("s2s1"), W.element("s1s2s3s2")
for z, c in sorted(mu_structure(T, x, y).items(), key=lambda t: t[0].sort_key()):
    print(f"mu[{x}, {y}; {z}] = {c}  =  {quantum_decompose(c)}")

# positivity of everything in sight, here for H3 (120 elements, over Q(sqrt 5))
H3 = CoxeterSystem.from_type("H3")
rep = check_positivity(KLTable(H3))
for name, r in rep.results.items():
    print(name, "passed" if r.passed else "FAILED", f"({r.checked} checked)")

# an infinite dihedral group, truncated by length
Winf = CoxeterSystem.from_type("I2(inf)")
Tinf = KLTable(Winf, 6)
print("I2(inf) up to length 6:", check_positivity(Tinf).passed)
