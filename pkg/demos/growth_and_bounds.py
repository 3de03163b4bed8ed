"""Ball growth of small subgroups and the closed-form bounds."""

import math

from shiftaut import build_oracle, enumerate_automorphisms, identity, nilpotent_step_bound, shift_power
from shiftaut import subgroup_growth, thue_morse
from shiftaut.groups import find_slow_window, slow_window_factor

o = build_oracle(thue_morse(), 60)
s = shift_power(o, 1)
flip = next(a for a in enumerate_automorphisms(o, 0) if a != identity(o))
for label, gens in (("<sigma>", [s, s.inv()]), ("<sigma, flip>", [s, s.inv(), flip])):
    series = subgroup_growth(gens, 8)
    print(f"{label:>14}: {list(series.gamma)}")

print()
print("step bound for degree d:", {d: nilpotent_step_bound(d) for d in (1, 2, 3, 4, 7, 11, 100)})

# A polynomial f always has a slow window; a fast exponential can avoid one for larger k.
samples = {"n^2": [n * n for n in range(1, 301)], "exp(0.14 n)": [math.floor(math.exp(0.14 * n)) for n in range(1, 301)]}
for label, f in samples.items():
    for k in (1, 3, 5):
        M = find_slow_window(f, k, 0.4)
        shown = f"M = {M}, allowed factor {slow_window_factor(M, 0.4):.4g}" if M else "none"
        print(f"f = {label}, k = {k}, beta = 0.4: slow window {shown}")
