import pytest

from shiftaut.block_codes import (
    Automorphism,
    Endomorphism,
    LocalRule,
    Rejection,
    apply_to_word,
    candidate_count,
    collapse_witness,
    compose,
    compose_all,
    default_depth,
    enumerate_automorphisms,
    equals,
    find_inverse,
    identity,
    is_endomorphism,
    promote_range,
    shift_power,
)
from shiftaut.errors import CapExceededError, NotInLanguageError, OutOfRangeError, RangeError


def exchange(oracle):
    return Automorphism(
        Endomorphism(LocalRule(0, {"0": "1", "1": "0"}), oracle, oracle.stabilized_to),
        Endomorphism(LocalRule(0, {"0": "1", "1": "0"}), oracle, oracle.stabilized_to),
    )


class TestShiftAndApply:
    def test_shift_power(self, tm):
        assert shift_power(tm, 1)("0110") == "10"
        assert shift_power(tm, -1)("0110") == "01"
        assert shift_power(tm, 0).radius == 0
        assert shift_power(tm, 3).minimal_range == 3

    def test_identity_and_exchange(self, tm):
        assert identity(tm)("0110") == "0110"
        assert exchange(tm)("0110") == "1001"

    def test_errors(self, tm):
        with pytest.raises(RangeError):
            apply_to_word(shift_power(tm, 2), "0110")
        with pytest.raises(NotInLanguageError):
            apply_to_word(identity(tm), "000")

    def test_inverse_pair(self, fib):
        s = shift_power(fib, 1)
        assert equals(compose(s, shift_power(fib, -1)), identity(fib, 2))
        assert s.inv() == shift_power(fib, -1)


class TestPromotionAndComposition:
    def test_promote_identity(self, tm):
        assert promote_range(identity(tm), 2)("01101") == "1"

    def test_promote_agrees(self, fib):
        s = shift_power(fib, 1)
        p = promote_range(s, 2)
        for w in fib.factors(9):
            assert p(w) == s(w)[1:-1]
        assert equals(s, p) and s == p
        assert promote_range(promote_range(identity(fib), 1), 2).forward.rule.table == \
            promote_range(identity(fib), 2).forward.rule.table

    def test_promote_down_fails(self, fib):
        with pytest.raises(ValueError):
            promote_range(shift_power(fib, 2), 1)

    def test_compose(self, fib):
        s = shift_power(fib, 1)
        ss = compose(s, s)
        assert ss.radius == 2 and ss == shift_power(fib, 2)
        one = compose(s, shift_power(fib, -1))
        assert one.radius == 2 and one == identity(fib)
        assert compose_all([s] * 4).radius == 4

    def test_compose_is_application(self, tm):
        a, b = shift_power(tm, 1), exchange(tm)
        ab = compose(a, b)
        for w in tm.factors(7):
            assert ab(w) == a(b(w))

    def test_equality(self, tm, fib):
        assert compose(exchange(tm), exchange(tm)) == identity(tm)
        assert shift_power(fib, 1) != identity(fib)
        assert len({shift_power(fib, 1), promote_range(shift_power(fib, 1), 3)}) == 1

    def test_composite_range_cap(self, per01):
        with pytest.raises(RangeError):
            compose(shift_power(per01, 5), shift_power(per01, 5))


class TestEndomorphismChecks:
    def test_constant_rule_rejected(self, fib):
        r = is_endomorphism(LocalRule(0, {"0": "1", "1": "1"}), fib, 10)
        assert isinstance(r, Rejection)
        assert r.witness == "00" and r.image == "11"

    def test_shift_and_exchange_accepted(self, fib, tm):
        e = is_endomorphism(shift_power(fib, 1).forward.rule, fib, 20)
        assert isinstance(e, Endomorphism) and e.verified_depth == 20
        e = is_endomorphism(LocalRule(0, {"0": "1", "1": "0"}), tm, tm.stabilized_to)
        assert e.verified_depth == tm.stabilized_to

    def test_depth_beyond_oracle(self, fib):
        with pytest.raises(OutOfRangeError):
            is_endomorphism(LocalRule(0, {"0": "0", "1": "1"}), fib, fib.stabilized_to + 1)

    def test_find_inverse(self, fib, tm):
        s = shift_power(fib, 1)
        a = find_inverse(s.forward, fib, 1)
        assert a is not None and a.inv() == shift_power(fib, -1)
        x = find_inverse(exchange(tm).forward, tm, 0)
        assert x is not None and x.inv() == x

    def test_non_injective_has_no_inverse(self, full2):
        xor = LocalRule(1, {W: str(int(W[1]) ^ int(W[2])) for W in full2.factors(3)})
        e = is_endomorphism(xor, full2, full2.stabilized_to)
        assert isinstance(e, Endomorphism)
        assert find_inverse(e, full2, 3) is None
        u, v = collapse_witness(e, 1)
        assert u != v and xor.apply(u) == xor.apply(v) and u[2] != v[2]


class TestEnumeration:
    def test_fibonacci(self, fib):
        assert enumerate_automorphisms(fib, 0) == [identity(fib)]
        assert set(enumerate_automorphisms(fib, 1)) == {shift_power(fib, j) for j in (-1, 0, 1)}

    def test_thue_morse(self, tm):
        E = exchange(tm)
        assert set(enumerate_automorphisms(tm, 0)) == {identity(tm), E}
        expected = {compose(shift_power(tm, j), g) for j in (-1, 0, 1) for g in (identity(tm), E)}
        assert set(enumerate_automorphisms(tm, 1)) == expected

    def test_modes_agree(self, tm, pd):
        for o in (tm, pd):
            for R in (0, 1, 2):
                assert enumerate_automorphisms(o, R) == enumerate_automorphisms(o, R, mode="propagate")

    def test_embedding(self, tm):
        small = set(enumerate_automorphisms(tm, 1))
        assert small <= set(enumerate_automorphisms(tm, 2, mode="propagate"))

    def test_cap(self, tm):
        with pytest.raises(CapExceededError) as exc:
            enumerate_automorphisms(tm, 2, cap=100)
        assert exc.value.estimate == candidate_count(tm, 2) == 2**12

    def test_commutes_with_shift(self, tm):
        s = shift_power(tm, 1)
        for a in enumerate_automorphisms(tm, 1):
            for w in tm.factors(8):
                assert a(s(w)) == s(a(w))
            assert equals(compose(a, a.inv()), identity(tm, 2))
            assert a.verified_depth >= default_depth(1)

    def test_periodic(self, per01):
        auts = enumerate_automorphisms(per01, 1)
        assert set(auts) == {identity(per01), shift_power(per01, 1)}

    def test_serialization_order(self, tm):
        d = enumerate_automorphisms(tm, 1)[0].to_dict()
        assert [p[0] for p in d["table"]] == tm.sorted_factors(3)
        assert d["range"] == 1 and d["minimal_range"] == 0
