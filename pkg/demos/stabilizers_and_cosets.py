"""Cylinder stabilizers G_w, their action on return words, and the coset check."""

import math

from shiftaut import build_marked_word, build_oracle, coset_condition_check, enumerate_automorphisms, g_w
from shiftaut import SubshiftSpec, cylinder_action, thue_morse
from shiftaut.groups import aut_id

o = build_oracle(thue_morse(), 160)
prof = o.complexity_series()

for w in ("0", "01", "0110"):
    G = g_w(o, w)
    rd = G.return_data
    print(f"w = {w}: K_w = {rd.K_w}, |U_w| = {rd.size}, |G_w| = {G.order}")
    for a in G.automorphisms:
        act = cylinder_action(a, rd)
        print(f"  {aut_id(a)} acts with order {act.order()}, divides P(K_w)! = {prof.P(rd.K_w)}!:",
              math.factorial(prof.P(rd.K_w)) % act.order() == 0)

marked = build_marked_word(o, 1, "step1")
G = g_w(o, marked.word)
report = coset_condition_check(enumerate_automorphisms(o, 1), marked, G)
print()
print(f"marked word {marked.word} (core {marked.core}), |G| = {G.order}")
print("image classes:", report.image_partition)
print("coset classes:", report.coset_partition)
print("partitions agree:", report.holds)

# A periodic shift where exchanging 1 and 2 fixes the cylinder [0].
p = build_oracle(SubshiftSpec.periodic("0102"), 24)
G = g_w(p, "0")
print()
print(f"periodic 0102, w = 0: U_w = {G.return_data.return_words}, |G_w| = {G.order}")
for a in G.automorphisms:
    print(f"  {aut_id(a)} permutes U_w as {cylinder_action(a, G.return_data).mapping()}")
