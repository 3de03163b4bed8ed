"""Complexity profiles of a few minimal subshifts.

Prints P(n), the unique-extension delay k_n and the doubling time d_n
side by side, then checks P(n + 2 k_n) >= 2 P(n) on the certified range.
"""

from shiftaut import build_oracle, doubling_time, fibonacci, k_n, period_doubling, thue_morse

for spec in (fibonacci(), thue_morse(), period_doubling()):
    o = build_oracle(spec, 120)
    prof = o.complexity_series()
    print(f"== {spec.label()}  (certified to n = {o.stabilized_to})")
    print(" n   P  k_n  d_n")
    for n in range(1, 13):
        print(f"{n:2d} {prof.P(n):3d} {k_n(o, n)!s:>4} {doubling_time(prof, n):4d}")
    bad = [n for n in range(1, 30) if prof.P(n + 2 * k_n(o, n)) < 2 * prof.P(n)]
    print("doubling within 2 k_n fails at:", bad or "nowhere")
    print()
