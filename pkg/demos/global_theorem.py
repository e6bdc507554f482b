"""The Hodge-Riemann relations for every indecomposable B_x in B2.

Each B_x is cut out of a Bott-Samelson module, its form is restricted and
normalized, and HL and HR are checked at several dominant regular points.

Run with:  python3 demos/global_theorem.py
"""
from coxhodge.coxeter import CoxeterSystem, enumerate_elements
from coxhodge.lefschetz import from_module, survey_ample_cone
from coxhodge.reflrep import sample_dominant_regular
from coxhodge.soergel import indecomposable

W = CoxeterSystem.from_type("B2")
lams = sample_dominant_regular(W.realization, 5, seed=1)

for x in enumerate_elements(W):
    M, F = indecomposable(W, x)
    D = from_module(M, F, lams, str(x))
    # controls: a negated sample and zero, reported but not judged
    neg = [-c for c in D.ample[0]]
    rep = survey_ample_cone(D, controls=[neg, [0] * len(neg)])
    ctrl = [(e["hl"], e["hr"]) for e in rep.entries if e["kind"] == "control"]
    print(f"{str(x):>10}  dims {M.graded_dims()}  pass {rep.passed}  controls {ctrl}")
