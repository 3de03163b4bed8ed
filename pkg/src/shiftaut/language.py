"""Languages of subshifts given by finite descriptions.

A subshift is described by a :class:`SubshiftSpec` (a primitive substitution,
a Sturmian continued-fraction prefix, a periodic word or an explicit sample).
:func:`build_oracle` turns a spec into a :class:`LanguageOracle`, which holds
the exact factor sets ``L_n(X)`` for every ``n`` up to a certified depth.
Everything else in the package reads the language through an oracle.

Words are plain Python strings whose characters are alphabet symbols.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, NamedTuple, Sequence

import numpy as np

from .errors import (
    HorizonError,
    NonPrimitiveError,
    NotInLanguageError,
    OutOfRangeError,
    PeriodicShiftError,
    SpecError,
)

Word = str

VARIANTS = ("substitution", "sturmian", "periodic", "explicit")


@dataclass(frozen=True)
class Alphabet:
    """Finite ordered alphabet of single-character symbols."""

    symbols: tuple[str, ...]

    def __post_init__(self):
        if not self.symbols:
            raise SpecError("alphabet must be nonempty")
        if len(set(self.symbols)) != len(self.symbols):
            raise SpecError(f"alphabet symbols must be distinct: {self.symbols}")
        for s in self.symbols:
            if not isinstance(s, str) or len(s) != 1:
                raise SpecError(f"alphabet symbols must be single characters, got {s!r}")
        object.__setattr__(self, "_rank", {s: i for i, s in enumerate(self.symbols)})

    @classmethod
    def from_words(cls, *words: str) -> "Alphabet":
        return cls(tuple(sorted(set("".join(words)))))

    def __len__(self):
        return len(self.symbols)

    def __iter__(self):
        return iter(self.symbols)

    def __contains__(self, symbol):
        return symbol in self._rank

    def sort_key(self, word: Word) -> tuple[int, ...]:
        return tuple(self._rank[c] for c in word)

    def sorted(self, words: Iterable[Word]) -> list[Word]:
        """Words in canonical order: by length, then lexicographic in symbol order."""
        return sorted(words, key=lambda w: (len(w), self.sort_key(w)))

    def check_word(self, word: Word) -> None:
        for c in word:
            if c not in self._rank:
                raise SpecError(f"symbol {c!r} of {word!r} is not in the alphabet {self.symbols}")


# ---------------------------------------------------------------------------
# Subshift descriptions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SubshiftSpec:
    """Finite description of a subshift.

    Use the constructors :meth:`substitution`, :meth:`sturmian`,
    :meth:`periodic` and :meth:`explicit` rather than the raw fields.
    """

    variant: str
    rules: tuple[tuple[str, str], ...] = ()
    coefficients: tuple[int, ...] = ()
    word: str = ""
    trust_depth: int | None = None
    symbols: tuple[str, ...] = ()
    name: str = ""
    alphabet: Alphabet = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise SpecError(f"unknown variant {self.variant!r}; expected one of {VARIANTS}")
        if self.variant == "substitution":
            if not self.rules:
                raise SpecError("substitution needs at least one rule")
            keys = [a for a, _ in self.rules]
            if len(set(keys)) != len(keys):
                raise SpecError("substitution has repeated left-hand symbols")
            symbols = self.symbols or tuple(sorted(keys))
            alphabet = Alphabet(tuple(symbols))
            if set(keys) != set(alphabet.symbols):
                raise SpecError("substitution must define an image for every symbol")
            for a, img in self.rules:
                if not img:
                    raise SpecError(f"image of {a!r} is empty")
                alphabet.check_word(img)
            _check_primitive(dict(self.rules), alphabet)
        elif self.variant == "sturmian":
            if not self.coefficients:
                raise SpecError("sturmian spec needs at least one coefficient")
            if any(int(c) != c or c < 1 for c in self.coefficients):
                raise SpecError(f"continued fraction coefficients must be integers >= 1: {self.coefficients}")
            alphabet = Alphabet(self.symbols or ("0", "1"))
            if len(alphabet) != 2:
                raise SpecError("sturmian words are binary")
        else:
            if not self.word:
                raise SpecError(f"{self.variant} spec needs a nonempty word")
            alphabet = Alphabet(self.symbols or tuple(sorted(set(self.word))))
            alphabet.check_word(self.word)
            if self.variant == "explicit" and self.trust_depth is None:
                raise SpecError("explicit samples must declare a trust depth")
        if self.trust_depth is not None and self.trust_depth < 1:
            raise SpecError("trust depth must be positive")
        object.__setattr__(self, "alphabet", alphabet)

    # constructors ---------------------------------------------------------

    @classmethod
    def substitution(cls, rules: Mapping[str, str], symbols: Sequence[str] | None = None, name: str = ""):
        return cls("substitution", rules=tuple(rules.items()), symbols=tuple(symbols or ()), name=name)

    @classmethod
    def sturmian(cls, coefficients: Sequence[int], name: str = ""):
        return cls("sturmian", coefficients=tuple(int(c) for c in coefficients), name=name)

    @classmethod
    def periodic(cls, word: str, trust_depth: int | None = None, name: str = ""):
        return cls("periodic", word=word, trust_depth=trust_depth, name=name)

    @classmethod
    def explicit(cls, sample: str, trust_depth: int, symbols: Sequence[str] | None = None, name: str = ""):
        return cls("explicit", word=sample, trust_depth=trust_depth, symbols=tuple(symbols or ()), name=name)

    @classmethod
    def full_shift(cls, symbols: str = "01", depth: int = 10):
        """Explicit spec whose sample is a de Bruijn word containing every word of length ``depth``."""
        return cls.explicit(de_bruijn(symbols, depth), trust_depth=depth, symbols=tuple(symbols),
                            name=f"full-{len(symbols)}-shift")

    # serialization ----------------------------------------------------------

    def to_dict(self) -> dict:
        d: dict = {"variant": self.variant}
        if self.name:
            d["name"] = self.name
        if self.variant == "substitution":
            d["rules"] = dict(self.rules)
        elif self.variant == "sturmian":
            d["coefficients"] = list(self.coefficients)
        else:
            d["word"] = self.word
        if self.trust_depth is not None:
            d["trust_depth"] = self.trust_depth
        if self.symbols:
            d["symbols"] = list(self.symbols)
        return d

    @classmethod
    def from_dict(cls, d: Mapping) -> "SubshiftSpec":
        d = dict(d)
        variant = d.pop("variant", None)
        name = str(d.pop("name", ""))
        symbols = tuple(str(s) for s in d.pop("symbols", ()) or ())
        if variant == "substitution":
            rules = d.pop("rules", None)
            if not isinstance(rules, Mapping):
                raise SpecError("substitution spec needs a 'rules' mapping")
            spec = cls.substitution({str(k): str(v) for k, v in rules.items()}, symbols=symbols, name=name)
        elif variant == "sturmian":
            coeffs = d.pop("coefficients", None)
            if not isinstance(coeffs, (list, tuple)):
                raise SpecError("sturmian spec needs a 'coefficients' list")
            spec = cls.sturmian(coeffs, name=name)
        elif variant in ("periodic", "explicit"):
            word = d.pop("word", None)
            if not isinstance(word, str):
                raise SpecError(f"{variant} spec needs a 'word' string")
            trust = d.pop("trust_depth", None)
            spec = cls(variant, word=word, trust_depth=None if trust is None else int(trust),
                       symbols=symbols, name=name)
        elif variant == "full_shift":
            spec = cls.full_shift("".join(symbols) or "01", int(d.pop("trust_depth", 10)))
        else:
            raise SpecError(f"unknown variant {variant!r}")
        if d:
            raise SpecError(f"unexpected keys in spec: {sorted(d)}")
        return spec

    def digest(self) -> str:
        """Content hash of the description; the display name does not take part."""
        d = self.to_dict()
        d.pop("name", None)
        blob = json.dumps(d, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()[:16]

    def label(self) -> str:
        return self.name or f"{self.variant}:{self.digest()}"


def _check_primitive(rules: dict[str, str], alphabet: Alphabet) -> None:
    n = len(alphabet)
    idx = {s: i for i, s in enumerate(alphabet)}
    m = np.zeros((n, n), dtype=bool)
    for a, img in rules.items():
        for c in img:
            m[idx[a], idx[c]] = True
    # Wielandt: a primitive n x n matrix has M^k > 0 for k = (n-1)^2 + 1
    power = m.copy()
    for _ in range((n - 1) ** 2):
        power = (power.astype(np.int64) @ m.astype(np.int64)) > 0
    bad = np.flatnonzero(~power.all(axis=1))
    if bad.size:
        witness = alphabet.symbols[bad[0]]
        raise NonPrimitiveError(
            f"substitution is not primitive: iterated images of {witness!r} never contain every symbol",
            witness,
        )


def fibonacci() -> SubshiftSpec:
    return SubshiftSpec.substitution({"0": "01", "1": "0"}, name="fibonacci")


def thue_morse() -> SubshiftSpec:
    return SubshiftSpec.substitution({"0": "01", "1": "10"}, name="thue-morse")


def period_doubling() -> SubshiftSpec:
    return SubshiftSpec.substitution({"0": "01", "1": "00"}, name="period-doubling")


def tribonacci() -> SubshiftSpec:
    return SubshiftSpec.substitution({"0": "01", "1": "02", "2": "0"}, name="tribonacci")


def de_bruijn(symbols: str, order: int) -> str:
    """Linear de Bruijn word: every word of length ``order`` occurs exactly once."""
    k = len(symbols)
    a = [0] * (k * order)
    seq: list[int] = []

    def db(t, p):
        if t > order:
            if order % p == 0:
                seq.extend(a[1 : p + 1])
        else:
            a[t] = a[t - p]
            db(t + 1, p)
            for j in range(a[t - p] + 1, k):
                a[t] = j
                db(t + 1, t)

    db(1, 1)
    cyclic = "".join(symbols[i] for i in seq)
    return cyclic + cyclic[: order - 1]


# ---------------------------------------------------------------------------
# Sample generation
# ---------------------------------------------------------------------------


def substitution_prefix(rules: Mapping[str, str], length: int) -> str:
    """Prefix of a one-sided fixed point of (a power of) the substitution."""
    # follow first letters until a letter a with sigma^p(a) starting with a
    a = min(rules)
    seen = []
    while a not in seen:
        seen.append(a)
        a = rules[a][0]
    p = len(seen) - seen.index(a)
    word = a
    while len(word) < length:
        nxt = word
        for _ in range(p):
            nxt = "".join(rules[c] for c in nxt)
        if len(nxt) == len(word):
            raise SpecError("substitution does not expand, no infinite fixed point")
        word = nxt
    return word[:length]


def standard_word(coefficients: Sequence[int], length: int) -> str:
    """Prefix of the characteristic Sturmian word via the standard-word recursion.

    ``s_{-1} = 1``, ``s_0 = 0`` and ``s_n = s_{n-1}^{a_n} s_{n-2}``.  The
    coefficient prefix is reused cyclically once exhausted.
    """
    prev, cur = "1", "0"
    i = 0
    while len(cur) < length or i == 0:
        a = coefficients[i % len(coefficients)]
        prev, cur = cur, cur * a + prev
        i += 1
    return cur[:length]


def _sample(spec: SubshiftSpec, length: int) -> str:
    if spec.variant == "substitution":
        return substitution_prefix(dict(spec.rules), length)
    if spec.variant == "sturmian":
        return standard_word(spec.coefficients, length)
    if spec.variant == "periodic":
        reps = -(-length // len(spec.word))
        return (spec.word * reps)[:length]
    return spec.word


def _factor_sets(sample: str, depth: int) -> dict[int, frozenset[str]]:
    return {
        n: frozenset(sample[i : i + n] for i in range(len(sample) - n + 1))
        for n in range(1, depth + 1)
    }


def recurrence_estimate(sample: str, n: int) -> int:
    """Observed length of the shortest window of ``sample`` that contains every length-``n`` factor.

    Computed as the largest gap between consecutive occurrences of a
    length-``n`` word (the leading and trailing gaps included), plus ``n - 1``.
    """
    last: dict[str, int] = {}
    gap = 0
    for i in range(len(sample) - n + 1):
        w = sample[i : i + n]
        gap = max(gap, i - last.get(w, -1))
        last[w] = i
    end = len(sample) - n + 1
    for i in last.values():
        gap = max(gap, end - i)
    return gap + n - 1


# ---------------------------------------------------------------------------
# The oracle
# ---------------------------------------------------------------------------


class LanguageOracle:
    """Exact factor sets ``L_1(X), ..., L_{stabilized_to}(X)`` of a subshift.

    Oracles are immutable after construction.  ``unstable`` marks a partial
    oracle whose certified depth fell short of the requested target.
    """

    def __init__(self, spec: SubshiftSpec, factor_cache: Mapping[int, frozenset[str]],
                 stabilized_to: int, sample: str, unstable: bool = False, target: int | None = None):
        self.spec = spec
        self.alphabet = spec.alphabet
        self._cache = {n: frozenset(v) for n, v in factor_cache.items() if n <= stabilized_to}
        self.stabilized_to = stabilized_to
        self.sample = sample
        self.sample_length = len(sample)
        self.unstable = unstable
        self.target = stabilized_to if target is None else target
        self._sorted: dict[int, list[str]] = {}

    def __repr__(self):
        flag = ", unstable" if self.unstable else ""
        return f"LanguageOracle({self.spec.label()}, stabilized_to={self.stabilized_to}{flag})"

    def _check(self, n: int) -> None:
        if n < 0 or n > self.stabilized_to:
            raise OutOfRangeError(
                f"length {n} is outside the certified range 0..{self.stabilized_to}", self.stabilized_to
            )

    def factors(self, n: int) -> frozenset[str]:
        self._check(n)
        if n == 0:
            return frozenset({""})
        return self._cache[n]

    def sorted_factors(self, n: int) -> list[str]:
        if n not in self._sorted:
            self._sorted[n] = self.alphabet.sorted(self.factors(n))
        return self._sorted[n]

    def __contains__(self, word: str) -> bool:
        return len(word) <= self.stabilized_to and word in self.factors(len(word))

    def require(self, word: str) -> None:
        self._check(len(word))
        if word not in self.factors(len(word)):
            raise NotInLanguageError(word)

    def complexity(self, n: int) -> int:
        return len(self.factors(n))

    def complexity_series(self, N: int | None = None) -> "ComplexityProfile":
        N = self.stabilized_to if N is None else N
        self._check(N)
        return ComplexityProfile(tuple(self.complexity(n) for n in range(1, N + 1)),
                                 source=self.spec.digest(), alphabet_size=len(self.alphabet))

    def right_extensions(self, word: str) -> list[str]:
        nxt = self.factors(len(word) + 1)
        return [a for a in self.alphabet if word + a in nxt]

    def left_extensions(self, word: str) -> list[str]:
        nxt = self.factors(len(word) + 1)
        return [a for a in self.alphabet if a + word in nxt]

    def occurrences(self, word: str) -> list[int]:
        """Start positions of ``word`` in the generated sample."""
        out, i = [], self.sample.find(word)
        while i >= 0:
            out.append(i)
            i = self.sample.find(word, i + 1)
        return out


def _closure_depth(sets: Mapping[int, frozenset[str]], alphabet: Alphabet, depth: int) -> int:
    """Largest d <= depth such that L_1..L_d is factorial and extendable below d."""
    for n in range(1, depth):
        longer = sets[n + 1]
        for w in sets[n]:
            if not any(w + a in longer for a in alphabet) or not any(a + w in longer for a in alphabet):
                return n
        for w in longer:
            if w[1:] not in sets[n] or w[:-1] not in sets[n]:
                return n
    return depth


def build_oracle(spec: SubshiftSpec, target_length: int, *, max_sample: int = 1 << 21,
                 repetitivity_multiple: float = 4.0, cache=None) -> LanguageOracle:
    """Compute and certify the factor sets of ``spec`` up to ``target_length``.

    Substitution and Sturmian samples are grown by doubling until three
    consecutive prefixes (two doublings) give identical factor sets and the
    prefix is at least ``repetitivity_multiple`` times the observed recurrence
    window.  Periodic and explicit specs are clipped to their trust depth.
    If the sample cap is hit, a partial oracle flagged ``unstable`` is
    returned with the depth actually achieved.
    """
    if target_length < 1:
        raise SpecError("target length must be at least 1")
    if cache is not None:
        hit = cache.load(spec, target_length)
        if hit is not None:
            sample = _sample(spec, max(64, 8 * target_length)) if spec.variant != "explicit" else spec.word
            return LanguageOracle(spec, hit, target_length, sample, target=target_length)
    oracle = _build(spec, target_length, max_sample, repetitivity_multiple)
    if cache is not None and not oracle.unstable:
        cache.store(spec, oracle)
    return oracle


def _build(spec, target, max_sample, multiple):
    alphabet = spec.alphabet
    if spec.variant == "periodic":
        depth = target if spec.trust_depth is None else min(target, spec.trust_depth)
        p = spec.word
        cyc = p * (depth // len(p) + 2)
        sets = {n: frozenset(cyc[i : i + n] for i in range(len(p))) for n in range(1, depth + 1)}
        sample = _sample(spec, max(4 * len(p), 2 * depth + 2 * len(p)))
        return LanguageOracle(spec, sets, depth, sample, unstable=depth < target, target=target)

    if spec.variant == "explicit":
        depth = min(target, spec.trust_depth, len(spec.word))
        sets = _factor_sets(spec.word, depth)
        depth = _closure_depth(sets, alphabet, depth)
        return LanguageOracle(spec, sets, depth, spec.word, unstable=depth < target, target=target)

    length = max(64, 8 * target)
    history: list[dict[int, frozenset[str]]] = []
    while True:
        sample = _sample(spec, length)
        history.append(_factor_sets(sample, target))
        if len(history) >= 3 and history[-1] == history[-2] == history[-3]:
            if length >= multiple * recurrence_estimate(sample, target):
                sets = history[-1]
                depth = _closure_depth(sets, alphabet, target)
                return LanguageOracle(spec, sets, depth, sample, unstable=depth < target, target=target)
        if 2 * length > max_sample:
            break
        length *= 2
    depth = 0
    if len(history) >= 3:
        a, b, c = history[-3:]
        while depth < target and a[depth + 1] == b[depth + 1] == c[depth + 1]:
            depth += 1
    sets = history[-1]
    depth = _closure_depth(sets, alphabet, depth) if depth else 0
    return LanguageOracle(spec, sets, depth, sample, unstable=True, target=target)


def factors(oracle: LanguageOracle, n: int) -> frozenset[str]:
    return oracle.factors(n)


def complexity(oracle: LanguageOracle, n: int) -> int:
    return oracle.complexity(n)


def complexity_series(oracle: LanguageOracle, N: int | None = None) -> "ComplexityProfile":
    return oracle.complexity_series(N)


# ---------------------------------------------------------------------------
# Complexity profiles
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ComplexityProfile:
    """The values ``P(1), ..., P(N)``; indexing is 1-based via :meth:`P`."""

    values: tuple[int, ...]
    source: str = ""
    alphabet_size: int | None = None

    def __post_init__(self):
        v = self.values
        if any(p < 1 for p in v):
            raise ValueError("complexity values must be positive")
        for a, b in zip(v, v[1:]):
            if b < a:
                raise ValueError(f"complexity must be nondecreasing, got {a} then {b}")
            if self.alphabet_size is not None and b > a * self.alphabet_size:
                raise ValueError(f"P(n+1) = {b} exceeds P(n)*|A| = {a * self.alphabet_size}")

    def __len__(self):
        return len(self.values)

    def P(self, n: int) -> int:
        if not 1 <= n <= len(self.values):
            raise OutOfRangeError(f"P({n}) is outside the profile range 1..{len(self.values)}",
                                  len(self.values))
        return self.values[n - 1]


class PeriodicityFlag(NamedTuple):
    flagged: bool
    n: int


def detect_eventual_periodicity(profile: ComplexityProfile) -> PeriodicityFlag:
    """Least ``n`` with ``P(n+1) == P(n)`` (Morse-Hedlund); ``n = -1`` if none in range."""
    v = profile.values
    for i in range(len(v) - 1):
        if v[i + 1] == v[i]:
            return PeriodicityFlag(True, i + 1)
    return PeriodicityFlag(False, -1)


def doubling_time(profile: ComplexityProfile, n: int) -> int:
    """Least ``m >= 1`` with ``P(n + m) >= 2 P(n)``."""
    target = 2 * profile.P(n)
    for m in range(1, len(profile) - n + 1):
        if profile.P(n + m) >= target:
            return m
    raise HorizonError(f"P does not double after n={n} within the profile (length {len(profile)})")


_NUDGE = 1e-12


def reference_doubling_time(n: int, beta: float, lam: float) -> int:
    """Doubling time of ``lam ** (n ** beta)``, from its closed form."""
    if n < 1 or not 0 < beta <= 1 or lam <= 1:
        raise ValueError("need n >= 1, 0 < beta <= 1, lambda > 1")
    x = n * (1 + math.log(2) / (n**beta * math.log(lam))) ** (1 / beta) - n
    return max(1, math.ceil(x - _NUDGE * max(1.0, x)))


def reference_doubling_asymptotic(n: int, beta: float, lam: float) -> float:
    """Leading term ``log 2 / (beta log lam) * n^(1 - beta)`` of the doubling time."""
    return math.log(2) / (beta * math.log(lam)) * n ** (1 - beta)


def doubling_time_ratio(n: int, beta: float, lam: float) -> float:
    return reference_doubling_time(n, beta, lam) / reference_doubling_asymptotic(n, beta, lam)


@dataclass(frozen=True)
class GrowthReport:
    n: tuple[int, ...]
    beta: float | None
    d: int | None
    log_ratio: tuple[float, ...] = ()
    log_tail_sup: tuple[float, ...] = ()
    poly_ratio: tuple[float, ...] = ()
    poly_tail_sup: tuple[float, ...] = ()

    def to_dict(self):
        return {k: (list(v) if isinstance(v, tuple) else v) for k, v in self.__dict__.items()}


def _tail_sup(xs):
    out, best = [], -math.inf
    for x in reversed(xs):
        best = max(best, x)
        out.append(best)
    return tuple(reversed(out))


def growth_diagnostics(profile: ComplexityProfile, beta: float | None = None,
                       d: int | None = None) -> GrowthReport:
    """Finite sequences ``log P(n)/n^beta`` and ``P(n)/n^d`` with their tail suprema.

    These stand in for the limsup conditions on the complexity; nothing here
    decides a limit.
    """
    if len(profile) < 3:
        raise ValueError("growth diagnostics need at least three profile values")
    ns = tuple(range(1, len(profile) + 1))
    kw: dict = {}
    if beta is not None:
        r = tuple(math.log(profile.P(n)) / n**beta for n in ns)
        kw.update(log_ratio=r, log_tail_sup=_tail_sup(r))
    if d is not None:
        r = tuple(profile.P(n) / n**d for n in ns)
        kw.update(poly_ratio=r, poly_tail_sup=_tail_sup(r))
    return GrowthReport(ns, beta, d, **kw)


# ---------------------------------------------------------------------------
# Unique extensions
# ---------------------------------------------------------------------------


class ExtensionCount(NamedTuple):
    right: int
    left: int
    right_capped: bool = False
    left_capped: bool = False


def unique_extension_count(oracle: LanguageOracle, w: str) -> ExtensionCount:
    """How many times ``w`` extends uniquely to the right and to the left.

    A count is flagged as capped when the certified depth ran out while the
    extension was still unique; it is then only a lower bound.
    """
    oracle.require(w)
    top = oracle.stabilized_to

    def run(step):
        u, count = w, 0
        while len(u) < top:
            nxt = step(u)
            if len(nxt) != 1:
                return count, False
            u = nxt[0]
            count += 1
        return count, True

    r, rc = run(lambda u: [u + a for a in oracle.right_extensions(u)])
    l, lc = run(lambda u: [a + u for a in oracle.left_extensions(u)])
    return ExtensionCount(r, l, rc, lc)


def unique_extension(oracle: LanguageOracle, w: str, right: int, left: int) -> str:
    """The word obtained by extending ``w`` uniquely ``right``/``left`` times."""
    u = w
    for _ in range(right):
        ext = oracle.right_extensions(u)
        if len(ext) != 1:
            raise NotInLanguageError(u + "?")
        u += ext[0]
    for _ in range(left):
        ext = oracle.left_extensions(u)
        if len(ext) != 1:
            raise NotInLanguageError("?" + u)
        u = ext[0] + u
    return u


def _periodic_guard(oracle: LanguageOracle) -> None:
    if oracle.spec.variant == "periodic":
        raise PeriodicShiftError("k_n is undefined on a periodic shift (minimum over an empty set)")
    flag = detect_eventual_periodicity(oracle.complexity_series())
    if flag.flagged:
        raise PeriodicShiftError(f"complexity stalls at n={flag.n}; the shift is periodic and k_n is undefined")


class KnValue(NamedTuple):
    value: int | None
    lower_bound: int
    word: str


def k_n_detail(oracle: LanguageOracle, n: int) -> KnValue:
    """``k_n`` together with the word realizing it and a lower bound when capped."""
    _periodic_guard(oracle)
    if n > oracle.stabilized_to:
        raise OutOfRangeError(f"n={n} is beyond the certified depth", oracle.stabilized_to)
    cap = math.ceil((oracle.stabilized_to - n) / 2)
    best, best_word, capped = -1, "", False
    for w in oracle.sorted_factors(n):
        c = unique_extension_count(oracle, w)
        m = min(c.right, c.left)
        m_capped = (c.right_capped and c.right <= c.left) or (c.left_capped and c.left <= c.right)
        if m > best or (m == best and m_capped and not capped):
            best, best_word, capped = m, w, m_capped
    k = best + 1
    if capped or k > cap:
        return KnValue(None, k, best_word)
    return KnValue(k, k, best_word)


def k_n(oracle: LanguageOracle, n: int) -> int | None:
    """Least ``k`` such that no length-``n`` word extends uniquely ``k`` times both ways.

    Returns ``None`` when the value is not certified within the search
    horizon ``ceil((stabilized_to - n) / 2)``.  Raises
    :class:`PeriodicShiftError` on periodic shifts.
    """
    return k_n_detail(oracle, n).value


@dataclass
class ExtensionProfile:
    """Per-length extension data for ``n = 1..N``."""

    P: dict[int, int]
    k: dict[int, int | None]
    k_lower: dict[int, int]
    d: dict[int, int | None]
    counts: dict[str, ExtensionCount]

    def k_ratio_sup(self, exponent: float = 1.0) -> float:
        """Empirical ``max k_n / n^exponent`` over the certified ``k_n``."""
        vals = [k / n**exponent for n, k in self.k.items() if k is not None]
        return max(vals) if vals else math.nan

    def rows(self):
        for n in sorted(self.P):
            yield n, self.P[n], self.k[n], self.d[n]


def extension_profile(oracle: LanguageOracle, N: int) -> ExtensionProfile:
    profile = oracle.complexity_series()
    P, k, k_lower, d, counts = {}, {}, {}, {}, {}
    for n in range(1, N + 1):
        P[n] = profile.P(n)
        for w in oracle.sorted_factors(n):
            counts[w] = unique_extension_count(oracle, w)
        res = k_n_detail(oracle, n)
        k[n], k_lower[n] = res.value, res.lower_bound
        try:
            d[n] = doubling_time(profile, n)
        except HorizonError:
            d[n] = None
    return ExtensionProfile(P, k, k_lower, d, counts)
