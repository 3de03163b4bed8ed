"""Følner candidates built from coset representatives, and their ratios.

The empirical mode takes R and M from the caller.  The strict mode tries to
derive them from the complexity bound and reports when the certified depth
is not enough.
"""

from shiftaut import BoundParams, InfeasibleError, build_oracle, fibonacci, folner_candidate, folner_ratio
from shiftaut import shift_power, identity

o = build_oracle(fibonacci(), 100)
F = folner_candidate(o, 1, BoundParams(beta=0.4), R=1, M=2)
print(f"|F| = {len(F)}; stats:")
for key, value in sorted(F.stats.items()):
    print(f"  {key}: {value}")
for name, phi in (("id", identity(o)), ("sigma", shift_power(o, 1)), ("sigma^-1", shift_power(o, -1))):
    print(f"ratio({name}) = {folner_ratio(F, phi)}")

try:
    folner_candidate(o, 1, BoundParams(beta=0.4), mode="strict")
except InfeasibleError as exc:
    print()
    print("strict mode:", exc)
    for key, value in sorted(exc.report.items()):
        print(f"  {key}: {value}")
