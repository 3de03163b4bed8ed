"""Enumerate range-R automorphisms and show what they do to a word."""

from shiftaut import build_oracle, enumerate_automorphisms, fibonacci, thue_morse
from shiftaut.groups import aut_id

for spec in (fibonacci(), thue_morse()):
    o = build_oracle(spec, 60)
    w = o.sorted_factors(12)[0]
    print(f"== {spec.label()}, sample word {w}")
    for R in (0, 1, 2):
        auts = enumerate_automorphisms(o, R, mode="propagate")
        print(f"range {R}: {len(auts)} automorphisms")
    for a in enumerate_automorphisms(o, 1):
        print(f"  {aut_id(a):>12}  {w} -> {a(w)}  (minimal range {a.minimal_range})")
    print()
