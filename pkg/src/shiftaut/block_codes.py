"""Sliding block codes on a subshift and the finite slices ``Aut_R(X)``.

A :class:`LocalRule` of range ``R`` maps each word of ``L_{2R+1}(X)`` to a
symbol.  Applied to a word of length ``m`` it produces a word of length
``m - 2R`` (the output is aligned with the centre of the input).  An
:class:`Endomorphism` is a rule whose images were checked to stay in the
language up to a recorded depth, and an :class:`Automorphism` pairs an
endomorphism with an inverse of the same range.

Membership of an image in ``L(X)`` can only be checked against the certified
factor sets, so every accepted code carries ``verified_depth``.
"""

from __future__ import annotations

import itertools
from collections import deque
from typing import Iterable, Mapping, NamedTuple

from .errors import (
    CapExceededError,
    ContractViolation,
    NotInLanguageError,
    OutOfRangeError,
    RangeError,
)
from .language import LanguageOracle

K_DEFAULT = 8


def default_depth(R: int, K: int = K_DEFAULT) -> int:
    return max(4 * R + 2, 2 * R + 1 + 2 * K)


class LocalRule:
    """A map from the windows ``L_{2R+1}(X)`` to symbols."""

    __slots__ = ("radius", "table")

    def __init__(self, radius: int, table: Mapping[str, str]):
        if radius < 0:
            raise ValueError("range must be nonnegative")
        for w in table:
            if len(w) != 2 * radius + 1:
                raise ValueError(f"window {w!r} does not have length {2 * radius + 1}")
        self.radius = radius
        self.table = dict(table)

    def __repr__(self):
        return f"LocalRule(R={self.radius}, {len(self.table)} windows)"

    def apply(self, w: str) -> str:
        n = 2 * self.radius + 1
        if len(w) < n:
            raise RangeError(f"word of length {len(w)} is shorter than the window length {n}")
        table = self.table
        try:
            return "".join(table[w[i : i + n]] for i in range(len(w) - n + 1))
        except KeyError as e:
            raise NotInLanguageError(e.args[0]) from None

    def promote(self, S: int, oracle: LanguageOracle) -> "LocalRule":
        R = self.radius
        if S < R:
            raise ValueError(f"cannot promote range {R} down to {S}")
        if S == R:
            return self
        t = self.table
        return LocalRule(S, {W: t[W[S - R : S + R + 1]] for W in oracle.factors(2 * S + 1)})

    def restrict(self, S: int) -> "LocalRule | None":
        """The same code at range ``S <= R`` if the table factors through shorter windows."""
        R = self.radius
        small: dict[str, str] = {}
        for W, c in self.table.items():
            if small.setdefault(W[R - S : R + S + 1], c) != c:
                return None
        return LocalRule(S, small)

    def minimal(self) -> "LocalRule":
        for S in range(self.radius + 1):
            rule = self.restrict(S)
            if rule is not None:
                return rule
        return self


def compose_rules(a: LocalRule, b: LocalRule, oracle: LanguageOracle) -> LocalRule:
    """Rule of ``a o b`` (apply ``b`` first) at range ``R_a + R_b``."""
    S = a.radius + b.radius
    if 2 * S + 1 > oracle.stabilized_to:
        raise RangeError(f"composite range {S} needs windows of length {2 * S + 1}, "
                         f"beyond the certified depth {oracle.stabilized_to}")
    return LocalRule(S, {W: a.apply(b.apply(W)) for W in oracle.factors(2 * S + 1)})


class Rejection(NamedTuple):
    """Shortest word whose image under a rule leaves the language."""

    witness: str
    image: str


class Endomorphism:
    __slots__ = ("rule", "oracle", "verified_depth")

    def __init__(self, rule: LocalRule, oracle: LanguageOracle, verified_depth: int):
        self.rule = rule
        self.oracle = oracle
        self.verified_depth = max(verified_depth, 2 * rule.radius + 1)

    @property
    def radius(self) -> int:
        return self.rule.radius

    def __repr__(self):
        return f"Endomorphism(R={self.radius}, verified_depth={self.verified_depth})"

    def apply(self, w: str) -> str:
        return self.rule.apply(w)

    def promote(self, S: int) -> "Endomorphism":
        return Endomorphism(self.rule.promote(S, self.oracle), self.oracle,
                            self.verified_depth + 2 * (S - self.radius))


class Automorphism:
    """An endomorphism paired with its inverse, both at range ``R``.

    Equality and hashing compare the underlying maps of ``X`` (the forward
    tables at their minimal range), so codes at different promoted ranges
    are equal when they define the same automorphism.
    """

    __slots__ = ("forward", "inverse", "oracle", "_key", "_min")

    def __init__(self, forward: Endomorphism, inverse: Endomorphism):
        R = max(forward.radius, inverse.radius)
        self.forward = forward.promote(R)
        self.inverse = inverse.promote(R)
        self.oracle = forward.oracle
        self._key = None
        self._min = None

    @property
    def radius(self) -> int:
        return self.forward.radius

    @property
    def verified_depth(self) -> int:
        return min(self.forward.verified_depth, self.inverse.verified_depth)

    @property
    def minimal_range(self) -> int:
        """Smallest ``R`` with both the map and its inverse of range ``R``."""
        if self._min is None:
            self._min = max(self.forward.rule.minimal().radius, self.inverse.rule.minimal().radius)
        return self._min

    def key(self) -> tuple:
        """Range-independent canonical key: minimal range plus the table in canonical order."""
        if self._key is None:
            rule = self.forward.rule.minimal()
            windows = self.oracle.sorted_factors(2 * rule.radius + 1)
            values = "".join(rule.table[W] for W in windows)
            self._key = (rule.radius, self.oracle.alphabet.sort_key(values))
        return self._key

    def __eq__(self, other):
        if not isinstance(other, Automorphism):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __lt__(self, other):
        return self.key() < other.key()

    def __repr__(self):
        return f"Automorphism(R={self.radius}, minimal_range={self.minimal_range}, key={self.key()[1]})"

    def __call__(self, w: str) -> str:
        return apply_to_word(self, w)

    def inv(self) -> "Automorphism":
        return Automorphism(self.inverse, self.forward)

    def promote(self, S: int) -> "Automorphism":
        return Automorphism(self.forward.promote(S), self.inverse.promote(S))

    def canonical(self) -> "Automorphism":
        """The same automorphism expressed at its minimal range."""
        S = self.minimal_range
        if S == self.radius:
            return self
        f = self.forward.rule.restrict(S)
        g = self.inverse.rule.restrict(S)
        shrink = 2 * (self.radius - S)
        return Automorphism(Endomorphism(f, self.oracle, self.forward.verified_depth - shrink),
                            Endomorphism(g, self.oracle, self.inverse.verified_depth - shrink))

    def to_dict(self) -> dict:
        def pairs(rule):
            return [[W, rule.table[W]] for W in self.oracle.sorted_factors(2 * rule.radius + 1)]

        return {
            "range": self.radius,
            "minimal_range": self.minimal_range,
            "table": pairs(self.forward.rule),
            "inverse": pairs(self.inverse.rule),
            "verified_depth": self.verified_depth,
        }


# ---------------------------------------------------------------------------
# Basic operations
# ---------------------------------------------------------------------------


def shift_power(oracle: LanguageOracle, j: int) -> Automorphism:
    """``sigma^j`` as a code of range ``|j|``: the output at 0 reads offset ``j``."""
    R = abs(j)
    windows = oracle.factors(2 * R + 1)
    fwd = LocalRule(R, {W: W[R + j] for W in windows})
    inv = LocalRule(R, {W: W[R - j] for W in windows})
    depth = oracle.stabilized_to
    return Automorphism(Endomorphism(fwd, oracle, depth), Endomorphism(inv, oracle, depth))


def identity(oracle: LanguageOracle, R: int = 0) -> Automorphism:
    return shift_power(oracle, 0).promote(R)


def apply_to_word(a: Automorphism | Endomorphism, w: str) -> str:
    """Image of a certified word; has length ``|w| - 2R``."""
    oracle = a.oracle
    if len(w) < 2 * a.radius + 1:
        raise RangeError(f"word of length {len(w)} is shorter than 2R+1 = {2 * a.radius + 1}")
    if len(w) <= oracle.stabilized_to:
        oracle.require(w)
    rule = a.forward.rule if isinstance(a, Automorphism) else a.rule
    return rule.apply(w)


def promote_range(a, S: int):
    if S < a.radius:
        raise ValueError(f"cannot promote range {a.radius} to {S}")
    return a.promote(S)


def compose(a, b):
    """``a o b`` at range ``R_a + R_b`` (``b`` is applied first)."""
    oracle = a.oracle
    if isinstance(a, Automorphism) and isinstance(b, Automorphism):
        fwd = compose(a.forward, b.forward)
        inv = compose(b.inverse, a.inverse)
        return Automorphism(fwd, inv)
    rule = compose_rules(a.rule, b.rule, oracle)
    depth = min(b.verified_depth, a.verified_depth + 2 * b.radius)
    return Endomorphism(rule, oracle, depth)


def compose_all(auts: Iterable[Automorphism]) -> Automorphism:
    it = iter(auts)
    out = next(it)
    for a in it:
        out = compose(out, a)
    return out


def equals(a, b) -> bool:
    """Whether two codes define the same map, compared at a common range."""
    S = max(a.radius, b.radius)
    ra = (a.forward if isinstance(a, Automorphism) else a).rule.promote(S, a.oracle)
    rb = (b.forward if isinstance(b, Automorphism) else b).rule.promote(S, b.oracle)
    return ra.table == rb.table


def is_endomorphism(rule: LocalRule, oracle: LanguageOracle, depth: int) -> Endomorphism | Rejection:
    """Check that images of ``L_n`` land in ``L_{n-2R}`` for every ``n <= depth``.

    Returns an :class:`Endomorphism` verified to ``depth`` or a
    :class:`Rejection` carrying the shortest violating word.
    """
    R = rule.radius
    if depth > oracle.stabilized_to:
        raise OutOfRangeError(f"verification depth {depth} exceeds the certified depth", oracle.stabilized_to)
    for n in range(2 * R + 1, depth + 1):
        target = oracle.factors(n - 2 * R)
        for w in oracle.sorted_factors(n):
            img = rule.apply(w)
            if img not in target:
                return Rejection(w, img)
    return Endomorphism(rule, oracle, depth)


def _inverse_table(e: Endomorphism, r: int) -> dict[str, str] | None:
    oracle = e.oracle
    S = e.radius + r
    table: dict[str, str] = {}
    for W in oracle.factors(2 * S + 1):
        img = e.rule.apply(W)
        if table.setdefault(img, W[S]) != W[S]:
            return None
    if len(table) != oracle.complexity(2 * r + 1):
        return None
    return table


def collapse_witness(e: Endomorphism, r: int) -> tuple[str, str] | None:
    """Two certified words with equal images under ``e`` but different centres.

    Their existence rules out an inverse of range ``r``.
    """
    oracle = e.oracle
    S = e.radius + r
    seen: dict[str, str] = {}
    for W in oracle.sorted_factors(2 * S + 1):
        img = e.rule.apply(W)
        if img in seen and seen[img][S] != W[S]:
            return seen[img], W
        seen.setdefault(img, W)
    return None


def find_inverse(e: Endomorphism, oracle: LanguageOracle, R_inv: int,
                 depth: int | None = None) -> Automorphism | None:
    """Search for an inverse of range at most ``R_inv``.

    The condition ``psi o e = id`` on the windows of ``L_{2(R+r)+1}`` fixes
    every entry of a candidate table ``psi`` of range ``r``, so the search
    is a single pass per ``r`` rather than an enumeration.  The candidate is
    then checked for ``e o psi = id`` and image containment.
    """
    depth = e.verified_depth if depth is None else depth
    for r in range(R_inv + 1):
        S = e.radius + r
        if 2 * S + 1 > oracle.stabilized_to:
            raise OutOfRangeError(f"inverse search at range {r} needs depth {2 * S + 1}", oracle.stabilized_to)
        table = _inverse_table(e, r)
        if table is None:
            continue
        psi = LocalRule(r, table)
        if any(e.rule.apply(psi.apply(W)) != W[S] for W in oracle.factors(2 * S + 1)):
            continue
        checked = is_endomorphism(psi, oracle, min(depth, oracle.stabilized_to))
        if isinstance(checked, Rejection):
            continue
        return Automorphism(e, checked)
    return None


# ---------------------------------------------------------------------------
# Enumeration of Aut_R(X)
# ---------------------------------------------------------------------------


def _window_order(windows: list[str]) -> list[str]:
    """Windows in breadth-first order through overlaps, so each new window touches assigned ones."""
    by_prefix: dict[str, list[str]] = {}
    by_suffix: dict[str, list[str]] = {}
    for W in windows:
        by_prefix.setdefault(W[:-1], []).append(W)
        by_suffix.setdefault(W[1:], []).append(W)
    order, seen = [], set()
    for start in windows:
        if start in seen:
            continue
        seen.add(start)
        queue = deque([start])
        while queue:
            W = queue.popleft()
            order.append(W)
            for nb in by_prefix.get(W[1:], []) + by_suffix.get(W[:-1], []):
                if nb not in seen:
                    seen.add(nb)
                    queue.append(nb)
    return order


def _forced_values(oracle: LanguageOracle, R: int, fixing: str) -> dict[str, str] | None:
    """Window values forced by requiring every context of ``fixing`` to map onto it."""
    m = len(fixing)
    if m + 2 * R > oracle.stabilized_to:
        raise OutOfRangeError(f"contexts of {fixing!r} at range {R} exceed the certified depth",
                              oracle.stabilized_to)
    forced: dict[str, str] = {}
    for v in oracle.factors(m + 2 * R):
        if v[R : R + m] != fixing:
            continue
        for i in range(m):
            W = v[i : i + 2 * R + 1]
            if forced.setdefault(W, fixing[i]) != fixing[i]:
                return None
    return forced


def _propagated_tables(oracle: LanguageOracle, R: int, lookahead: int,
                       forced: Mapping[str, str], cap: int):
    windows = _window_order(oracle.sorted_factors(2 * R + 1))
    pos = {W: i for i, W in enumerate(windows)}
    n = 2 * R + 1
    checks: list[list[tuple[str, frozenset]]] = [[] for _ in windows]
    for t in range(1, lookahead + 1):
        target = oracle.factors(t + 1)
        for w in oracle.factors(n + t):
            last = max(pos[w[i : i + n]] for i in range(t + 1))
            checks[last].append((w, target))
    domains = [forced[W] if W in forced else oracle.alphabet.symbols for W in windows]
    table: dict[str, str] = {}
    visited = 0

    def dfs(i):
        nonlocal visited
        if i == len(windows):
            yield dict(table)
            return
        W = windows[i]
        for c in domains[i]:
            visited += 1
            if visited > cap:
                raise CapExceededError(f"propagation visited more than {cap} partial tables", visited)
            table[W] = c
            if all("".join(table[w[j : j + n]] for j in range(len(w) - n + 1)) in target
                   for w, target in checks[i]):
                yield from dfs(i + 1)
        table.pop(W, None)

    yield from dfs(0)


def candidate_count(oracle: LanguageOracle, R: int) -> int:
    return len(oracle.alphabet) ** oracle.complexity(2 * R + 1)


def enumerate_automorphisms(oracle: LanguageOracle, R: int, depth: int | None = None, *,
                            mode: str = "exhaustive", cap: int = 1 << 20,
                            fixing: str | None = None) -> list[Automorphism]:
    """All of ``Aut_R(X)`` (verified to ``depth``), in canonical order.

    ``mode="exhaustive"`` tries every table on ``L_{2R+1}`` and refuses when
    there are more than ``cap`` of them.  ``mode="propagate"`` assigns the
    table window by window and prunes as soon as a short word is sent outside
    the language.  With ``fixing=w`` only codes mapping ``[w]`` into itself
    are kept (the pruning uses this too).
    """
    depth = default_depth(R) if depth is None else depth
    if depth < 2 * R + 1:
        raise ValueError("verification depth must be at least 2R+1")
    if depth > oracle.stabilized_to or 4 * R + 1 > oracle.stabilized_to:
        raise OutOfRangeError(f"Aut_{R} verified to depth {depth} needs a deeper oracle", oracle.stabilized_to)
    forced: dict[str, str] = {}
    if fixing is not None:
        forced = _forced_values(oracle, R, fixing)
        if forced is None:
            return []
    if mode == "exhaustive":
        estimate = candidate_count(oracle, R)
        if estimate > cap:
            raise CapExceededError(f"{estimate} candidate tables for R={R} exceed the cap {cap}", estimate)
        windows = oracle.sorted_factors(2 * R + 1)
        domains = [forced[W] if W in forced else oracle.alphabet.symbols for W in windows]
        tables = (dict(zip(windows, vals)) for vals in itertools.product(*domains))
    elif mode == "propagate":
        lookahead = max(1, min(depth - 2 * R - 1, 2 * R + 2))
        tables = _propagated_tables(oracle, R, lookahead, forced, cap)
    else:
        raise ValueError(f"unknown enumeration mode {mode!r}")

    found: dict[tuple, Automorphism] = {}
    for table in tables:
        e = is_endomorphism(LocalRule(R, table), oracle, depth)
        if isinstance(e, Rejection):
            continue
        a = find_inverse(e, oracle, R, depth)
        if a is not None:
            found.setdefault(a.key(), a)
    result = sorted(found.values())

    if fixing is None:
        members = set(result)
        for a in result:
            if a.inv() not in members:
                raise ContractViolation(f"inverse of {a} is missing from the enumeration of Aut_{R}")
        for j in range(-R, R + 1):
            if shift_power(oracle, j) not in members:
                raise ContractViolation(f"sigma^{j} is missing from the enumeration of Aut_{R}")
    return result
