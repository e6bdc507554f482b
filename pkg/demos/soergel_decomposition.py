"""Bott-Samelson modules and their indecomposable summands.

Run with:  python3 demos/soergel_decomposition.py
"""
from coxhodge.coxeter import CoxeterSystem
from coxhodge.soergel import bott_samelson, decompose, verify_categorification

W = CoxeterSystem.from_type("A2")

for word in [(0, 0), (0, 1), (0, 1, 0), (0, 1, 0, 1)]:
    M, F = bott_samelson(W, word)
    D = decompose(M, F)
    parts = " + ".join(f"B[{S.label}]({S.shift})" for S in D.summands)
    print("BS" + "".join(f"s{s + 1}" for s in word), "=", parts, " checks:", all(D.check().values()))

# module side against the Hecke algebra side, all reduced words up to length 5
rep = verify_categorification(CoxeterSystem.from_type("I2(5)"), 5)
print("I2(5):", len(rep.results), "words, all match:", rep.passed)
for r in rep.results[-2:]:
    print("  ", r["word"], r["module"])
