import math

from hypothesis import given, settings
from hypothesis import strategies as st

from brute import doubling_time_scan, step_bound_scan
from shiftaut.block_codes import compose, enumerate_automorphisms, equals, promote_range, shift_power
from shiftaut.groups import CylinderAction, find_slow_window, group_closure, nilpotent_step_bound, slow_window_holds
from shiftaut.language import (
    SubshiftSpec,
    build_oracle,
    detect_eventual_periodicity,
    doubling_time,
    k_n,
    reference_doubling_time,
    thue_morse,
)

TM = build_oracle(thue_morse(), 60)
TM_AUTS = enumerate_automorphisms(TM, 1)


@given(st.lists(st.integers(1, 10), min_size=1, max_size=4))
@settings(max_examples=25, deadline=None)
def test_sturmian_complexity(coeffs):
    o = build_oracle(SubshiftSpec.sturmian(coeffs), 25)
    assert [o.complexity(n) for n in range(1, o.stabilized_to + 1)] == list(range(2, o.stabilized_to + 2))


@given(st.text(alphabet="012", min_size=1, max_size=7))
@settings(max_examples=40, deadline=None)
def test_periodic_words(word):
    o = build_oracle(SubshiftSpec.periodic(word), 16)
    prof = o.complexity_series()
    assert max(prof.values) <= len(word)
    if len(prof) > len(word):
        assert detect_eventual_periodicity(prof).flagged


@given(st.integers(2, 40))
def test_doubling_inequalities_thue_morse(n):
    k = k_n(TM, n)
    if k is not None and n + 2 * k <= TM.stabilized_to:
        prof = TM.complexity_series()
        assert prof.P(n + 2 * k) >= 2 * prof.P(n)
        assert doubling_time(prof, n) <= 2 * k


@given(st.sampled_from(TM_AUTS), st.sampled_from(TM_AUTS), st.integers(0, 200))
@settings(max_examples=60, deadline=None)
def test_composition_homomorphism(a, b, i):
    words = TM.sorted_factors(9)
    w = words[i % len(words)]
    assert compose(a, b)(w) == a(b(w))
    assert len(a(w)) == len(w) - 2 * a.radius


@given(st.sampled_from(TM_AUTS), st.integers(1, 3))
@settings(deadline=None)
def test_promotion_invariance(a, extra):
    p = promote_range(a, a.radius + extra)
    assert equals(a, p) and a == p and hash(a) == hash(p)


@given(st.integers(-3, 3), st.integers(-3, 3))
def test_shift_powers_compose(i, j):
    assert compose(shift_power(TM, i), shift_power(TM, j)) == shift_power(TM, i + j)


@given(st.integers(1, 300), st.sampled_from([0.3, 0.5, 0.7, 1.0]), st.sampled_from([1.5, 2.0, 3.0]))
def test_reference_doubling_time_scan(n, beta, lam):
    assert reference_doubling_time(n, beta, lam) == doubling_time_scan(n, beta, lam)


@given(st.integers(1, 10**6))
def test_step_bound(d):
    s = nilpotent_step_bound(d)
    assert s == step_bound_scan(d) if d < 5000 else s * (s + 1) // 2 + 1 <= d < (s + 1) * (s + 2) // 2 + 1
    assert nilpotent_step_bound(d + 1) >= s


@given(st.lists(st.permutations(range(5)), min_size=1, max_size=3))
@settings(deadline=None)
def test_closure_is_group(perms):
    dom = tuple("abcde")
    G = group_closure([CylinderAction(dom, tuple(p)) for p in perms])
    assert tuple(range(5)) in G.elements
    assert 120 % G.order == 0
    for x in G.elements:
        assert all(tuple(y[j] for j in x) in G.elements for y in G.elements)


@given(st.lists(st.integers(0, 3), min_size=60, max_size=60), st.integers(1, 5))
def test_slow_window_post_hoc(steps, k):
    f, v = [], 1
    for s in steps:
        v += s
        f.append(v)
    M = find_slow_window(f, k, 0.4)
    if M is not None:
        assert slow_window_holds(f, k, 0.4, M)
        assert all(not slow_window_holds(f, k, 0.4, m) for m in range(math.ceil(len(f) / 3), M))
