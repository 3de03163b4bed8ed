"""Finite groups acting on return words, coset covers, Følner candidates and growth.

For a word ``w`` the automorphisms of range at most ``|w|//2`` that map the
cylinder ``[w]`` into itself act on the finite set of return words
``U_w = {u : wuw in L(X), |u| <= K_w}``.  That action is faithful, so the
group ``G_w`` they generate is handled as a permutation group on ``U_w``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

from .block_codes import (
    Automorphism,
    compose,
    enumerate_automorphisms,
    identity,
)
from .errors import (
    CapExceededError,
    ContractViolation,
    InfeasibleError,
    NotFoundError,
    OutOfRangeError,
    PeriodicShiftError,
    PreconditionError,
    RangeError,
)
from .language import (
    ComplexityProfile,
    ExtensionCount,
    LanguageOracle,
    detect_eventual_periodicity,
    unique_extension,
    unique_extension_count,
)

TOL = 1e-9


def aut_id(a: Automorphism) -> str:
    """Short stable label: minimal range and the minimal-range table values."""
    S, ranks = a.key()
    symbols = a.oracle.alphabet.symbols
    return f"R{S}:" + "".join(symbols[i] for i in ranks)


# ---------------------------------------------------------------------------
# Return words
# ---------------------------------------------------------------------------


class MinimalityWarning(UserWarning):
    pass


@dataclass(frozen=True)
class ReturnData:
    w: str
    K_w: int
    return_words: tuple[str, ...]
    observed_gap: int | None = None

    @property
    def size(self) -> int:
        return len(self.return_words)


def max_return_gap(oracle: LanguageOracle, w: str) -> ReturnData:
    """Largest gap ``K_w`` between consecutive occurrences of ``w``, and ``U_w``.

    ``K_w`` is read off the factor sets as the least ``K`` such that every
    factor of length ``K + |w| - 1`` contains ``w``; the gap observed in the
    generated sample is recorded alongside.  The sample is also parsed as
    ``... w u w u' w ...`` to confirm every ``u`` lies in ``U_w``.
    """
    oracle.require(w)
    m = len(w)
    K = 1
    while True:
        length = K + m - 1
        if length > oracle.stabilized_to:
            raise OutOfRangeError(f"return time of {w!r} exceeds the certified depth", oracle.stabilized_to)
        if all(w in v for v in oracle.factors(length)):
            break
        K += 1
    if 2 * m + K > oracle.stabilized_to:
        raise OutOfRangeError(f"return words of {w!r} need depth {2 * m + K}", oracle.stabilized_to)

    U = []
    for ell in range(K + 1):
        for v in oracle.sorted_factors(2 * m + ell):
            if v.startswith(w) and v.endswith(w):
                U.append(v[m : m + ell])
    U = tuple(oracle.alphabet.sorted(set(U)))

    occ = oracle.occurrences(w)
    observed = None
    if len(occ) < 2:
        warnings.warn(f"{w!r} does not recur in the sample; the shift may not be minimal", MinimalityWarning)
    else:
        observed = max(b - a for a, b in zip(occ, occ[1:]))
        if observed != K:
            warnings.warn(f"sample gap {observed} for {w!r} differs from the certified K_w = {K}",
                          MinimalityWarning)
        members = set(U)
        pos = occ[0]
        while True:
            nxt = oracle.sample.find(w, pos + m)
            if nxt < 0:
                break
            u = oracle.sample[pos + m : nxt]
            if u not in members:
                raise ContractViolation(f"sample segment {w}{u}{w} has u outside U_w")
            pos = nxt
    return ReturnData(w, K, U, observed)


# ---------------------------------------------------------------------------
# Stabilizers and their actions
# ---------------------------------------------------------------------------


def _contexts(oracle: LanguageOracle, core: str, R: int) -> list[str]:
    n = len(core) + 2 * R
    if n > oracle.stabilized_to:
        raise OutOfRangeError(f"contexts of a length-{len(core)} word at range {R} need depth {n}",
                              oracle.stabilized_to)
    return [v for v in oracle.sorted_factors(n) if v[R : R + len(core)] == core]


def _at_most(a: Automorphism, r: int) -> Automorphism | None:
    if a.radius <= r:
        return a
    if a.minimal_range <= r:
        return a.canonical()
    return None


def fixes_cylinder(a: Automorphism, w: str) -> bool:
    """Whether ``a`` maps ``[w]`` into itself, checked on every certified context of ``w``."""
    R = a.radius
    return all(a.forward.rule.apply(v) == w for v in _contexts(a.oracle, w, R))


def stabilizer_generators(oracle: LanguageOracle, w: str,
                          auts: Iterable[Automorphism] | None = None) -> list[Automorphism]:
    """``S_w``: automorphisms in ``Aut_{|w|//2}`` mapping ``[w]`` into ``[w]``.

    Without ``auts`` the set is enumerated directly, with the cylinder
    condition used to prune the search.
    """
    r = len(w) // 2
    if auts is None:
        S = enumerate_automorphisms(oracle, r, mode="propagate", fixing=w)
    else:
        S = []
        for a in auts:
            b = _at_most(a, r)
            if b is not None and fixes_cylinder(b, w):
                S.append(b)
        S = sorted(set(S))
    members = set(S)
    for a in S:
        if a.inv() not in members:
            raise ContractViolation(f"S_w for {w!r} is not closed under inverses")
    return S


@dataclass(frozen=True)
class CylinderAction:
    """A permutation of ``U_w``: ``domain[i]`` is sent to ``domain[images[i]]``."""

    domain: tuple[str, ...]
    images: tuple[int, ...]
    source: str = ""

    def __post_init__(self):
        if sorted(self.images) != list(range(len(self.domain))):
            raise ContractViolation(f"action of {self.source or 'element'} is not a bijection on U_w")

    def mapping(self) -> dict[str, str]:
        return {u: self.domain[j] for u, j in zip(self.domain, self.images)}

    def then(self, other: "CylinderAction") -> "CylinderAction":
        """``other o self``: apply ``self`` first."""
        return CylinderAction(self.domain, tuple(other.images[j] for j in self.images))

    def inverse(self) -> "CylinderAction":
        inv = [0] * len(self.images)
        for i, j in enumerate(self.images):
            inv[j] = i
        return CylinderAction(self.domain, tuple(inv))

    def power(self, e: int) -> "CylinderAction":
        result = tuple(range(len(self.domain)))
        base = self.images
        while e:
            if e & 1:
                result = tuple(base[j] for j in result)
            base = tuple(base[j] for j in base)
            e >>= 1
        return CylinderAction(self.domain, result)

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def order(self) -> int:
        seen, out = set(), 1
        for i in range(len(self.images)):
            if i in seen:
                continue
            length, j = 0, i
            while j not in seen:
                seen.add(j)
                j = self.images[j]
                length += 1
            out = math.lcm(out, length)
        return out


def cylinder_action(phi: Automorphism, rd: ReturnData) -> CylinderAction:
    """The permutation ``u -> v`` of ``U_w`` with ``phi[wuw] in [wvw]``.

    ``phi`` must map ``[w]`` into itself.  Since its range is at most
    ``|w|``, the middle of the image is read from ``wuw`` alone.  When the
    oracle is deep enough, every certified ``R``-padding of ``wuw`` is also
    mapped and must give ``wvw``.
    """
    w = rd.w
    if phi.minimal_range > len(w) // 2:
        raise RangeError(f"range {phi.minimal_range} exceeds |w|//2 = {len(w) // 2}")
    b = phi.canonical()
    if not fixes_cylinder(b, w):
        raise ContractViolation(f"{aut_id(b)} does not map [{w}] into itself")
    R, m = b.radius, len(w)
    index = {u: i for i, u in enumerate(rd.return_words)}
    images = []
    for u in rd.return_words:
        core = w + u + w
        v = b.forward.rule.apply(core[m - R : m + len(u) + R]) if u else ""
        if len(core) + 2 * R <= b.oracle.stabilized_to:
            for padded in _contexts(b.oracle, core, R):
                if b.forward.rule.apply(padded) != w + v + w:
                    raise ContractViolation(f"image of [{core}] depends on the padding {padded!r}")
        if v not in index:
            raise ContractViolation(f"image {v!r} of {u!r} is not a return word of {w!r}")
        images.append(index[v])
    return CylinderAction(rd.return_words, tuple(images), source=aut_id(b))


@dataclass
class FiniteGroup:
    """A permutation group on ``U_w``, stored as its full element set."""

    domain: tuple[str, ...]
    elements: frozenset[tuple[int, ...]]
    generators: tuple[CylinderAction, ...] = ()
    return_data: ReturnData | None = None
    automorphisms: tuple[Automorphism, ...] = ()

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, action: CylinderAction) -> bool:
        return action.images in self.elements


def group_closure(generators: Sequence[CylinderAction], domain: Sequence[str] | None = None,
                  cap: int = 100_000) -> FiniteGroup:
    """Closure of permutations under composition and inverses."""
    if generators:
        domain = generators[0].domain
        if any(g.domain != domain for g in generators):
            raise ValueError("generators act on different sets")
    elif domain is None:
        domain = ()
    domain = tuple(domain)
    ident = tuple(range(len(domain)))
    gens = set()
    for g in generators:
        gens.add(g.images)
        gens.add(g.inverse().images)
    elements = {ident}
    frontier = [ident]
    while frontier:
        new = []
        for x in frontier:
            for g in gens:
                y = tuple(g[j] for j in x)
                if y not in elements:
                    elements.add(y)
                    new.append(y)
                    if len(elements) > cap:
                        raise CapExceededError(f"group closure exceeded {cap} elements", len(elements))
        frontier = new
    return FiniteGroup(domain, frozenset(elements), tuple(generators))


def automorphism_closure(generators: Iterable[Automorphism], cap: int = 10_000) -> list[Automorphism]:
    """The finite group generated by some automorphisms, as block codes at minimal range."""
    gens = [g.canonical() for g in generators]
    if not gens:
        return []
    gens += [g.inv().canonical() for g in gens]
    one = identity(gens[0].oracle)
    elements = {one}
    frontier = [one]
    while frontier:
        new = []
        for x in frontier:
            for g in gens:
                y = compose(x, g).canonical()
                if y not in elements:
                    elements.add(y)
                    new.append(y)
                    if len(elements) > cap:
                        raise CapExceededError(f"closure exceeded {cap} automorphisms", len(elements))
        frontier = new
    return sorted(elements)


def g_w(oracle: LanguageOracle, w: str, auts: Iterable[Automorphism] | None = None) -> FiniteGroup:
    """``G_w`` as a permutation group on ``U_w``, with its generating automorphisms attached."""
    rd = max_return_gap(oracle, w)
    S = stabilizer_generators(oracle, w, auts)
    actions = [cylinder_action(a, rd) for a in S]
    group = group_closure(actions, domain=rd.return_words)
    group.return_data = rd
    group.automorphisms = tuple(S)
    if group.order > math.factorial(rd.size):
        raise ContractViolation("group is larger than the symmetric group on U_w")
    return group


def _legendre(n: int, p: int) -> int:
    e, q = 0, p
    while q <= n:
        e += n // q
        q *= p
    return e


def _factorize(m: int) -> dict[int, int]:
    out: dict[int, int] = {}
    p = 2
    while p * p <= m:
        while m % p == 0:
            out[p] = out.get(p, 0) + 1
            m //= p
        p += 1
    if m > 1:
        out[m] = out.get(m, 0) + 1
    return out


def divides_factorial(m: int, n: int) -> bool:
    """Whether ``m`` divides ``n!``, without forming ``n!``."""
    return all(_legendre(n, p) >= e for p, e in _factorize(m).items())


def order_divisibility_check(phi: Automorphism | CylinderAction, rd: ReturnData,
                             profile: ComplexityProfile) -> bool:
    """Whether the action of ``phi`` raised to ``P(K_w)!`` is the identity on ``U_w``."""
    action = phi if isinstance(phi, CylinderAction) else cylinder_action(phi, rd)
    return divides_factorial(action.order(), profile.P(rd.K_w))


# ---------------------------------------------------------------------------
# Marked words and the coset condition
# ---------------------------------------------------------------------------

MODES = {"step1": 2, "step2": 6}


@dataclass(frozen=True)
class MarkedWord:
    core: str
    extension: int
    word: str
    counts: ExtensionCount
    R: int
    mode: str

    @property
    def n(self) -> int:
        return len(self.core)


def build_marked_word(oracle: LanguageOracle, R: int, mode: str = "step1", *,
                      beta: float | None = None, min_length: int = 1) -> MarkedWord:
    """Extend the first qualifying word ``2R`` (step1) or ``6R`` (step2) times each way.

    Qualifying words extend uniquely at least that many times to both sides;
    the shortest length is searched first, then canonical order.  With
    ``beta`` the core length must exceed ``(4R)^(1/(1-beta))``.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {sorted(MODES)}")
    if oracle.spec.variant == "periodic" or detect_eventual_periodicity(oracle.complexity_series()).flagged:
        raise PeriodicShiftError("marked words are not constructed for periodic shifts")
    e = MODES[mode] * R
    n = min_length
    if beta is not None:
        n = max(n, math.floor((4 * R) ** (1 / (1 - beta))) + 1)
    best = None
    while n + 2 * e <= oracle.stabilized_to:
        for w in oracle.sorted_factors(n):
            c = unique_extension_count(oracle, w)
            if c.right >= e and c.left >= e:
                return MarkedWord(w, e, unique_extension(oracle, w, e, e), c, R, mode)
            if best is None or min(c.right, c.left) > min(best[1].right, best[1].left):
                best = (w, c)
        n += 1
    raise NotFoundError(f"no word extends uniquely {e} times both ways within depth {oracle.stabilized_to}",
                        best)


class CosetReport(NamedTuple):
    holds: bool
    image_partition: list[list[str]]
    coset_partition: list[list[str]]


def _partition(items: Sequence, same) -> list[list[int]]:
    classes: list[list[int]] = []
    for i in range(len(items)):
        for cls in classes:
            if same(items[cls[0]], items[i]):
                cls.append(i)
                break
        else:
            classes.append([i])
    return classes


def in_group(psi: Automorphism, group: FiniteGroup) -> bool:
    """Membership of an automorphism in ``G_w`` through its action on ``U_w``."""
    rd = group.return_data
    if psi.minimal_range > len(rd.w) // 2:
        raise RangeError(f"cannot decide membership of range {psi.minimal_range} element")
    b = psi.canonical()
    if not fixes_cylinder(b, rd.w):
        return False
    return cylinder_action(b, rd) in group


def coset_condition_check(auts: Sequence[Automorphism], marked: MarkedWord,
                          group: FiniteGroup) -> CosetReport:
    """Compare the partition of ``auts`` by the image of the marked word with the left-coset partition."""
    R = marked.R * MODES[marked.mode] // 2
    if R > len(marked.word) // 4:
        raise PreconditionError("range exceeds a quarter of the marked word")
    auts = [a if a.radius == R else _promote(a, R) for a in auts]
    images = [a.forward.rule.apply(marked.word) for a in auts]
    by_image = _partition(range(len(auts)), lambda i, j: images[i] == images[j])
    by_coset = _partition(range(len(auts)), lambda i, j: in_group(compose(auts[i].inv(), auts[j]), group))
    labels = [aut_id(a) for a in auts]

    def named(p):
        return [[labels[i] for i in cls] for cls in p]

    norm = lambda p: {frozenset(c) for c in p}  # noqa: E731
    return CosetReport(norm(by_image) == norm(by_coset), named(by_image), named(by_coset))


def _promote(a: Automorphism, R: int) -> Automorphism:
    b = _at_most(a, R)
    if b is None:
        raise PreconditionError(f"{aut_id(a)} has range above {R}")
    return b.promote(R)


def images_of(marked: MarkedWord, auts: Iterable[Automorphism], S: int) -> set[str]:
    return {_promote(a, S).forward.rule.apply(marked.word) for a in auts}


def coset_count_f(oracle: LanguageOracle, marked: MarkedWord, n: int,
                  auts: Sequence[Automorphism] | None = None) -> int:
    """Number of distinct images of the step-2 marked word under ``Aut_n`` embedded at range ``3R``."""
    S = 3 * marked.R
    if marked.mode != "step2":
        raise PreconditionError("f is defined on step-2 marked words")
    if n > S:
        raise PreconditionError(f"n = {n} exceeds 3R = {S}")
    if auts is None:
        auts = enumerate_automorphisms(oracle, n, mode="propagate")
    return len(images_of(marked, auts, S))


def coset_counts(oracle: LanguageOracle, marked: MarkedWord,
                 aut_sets: dict[int, Sequence[Automorphism]] | None = None) -> dict[int, int]:
    """``f(1..3R)``, checked to be nondecreasing."""
    S = 3 * marked.R
    aut_sets = aut_sets or {}
    f = {}
    for n in range(1, S + 1):
        if n not in aut_sets:
            aut_sets[n] = enumerate_automorphisms(oracle, n, mode="propagate")
        f[n] = coset_count_f(oracle, marked, n, aut_sets[n])
    vals = [f[n] for n in sorted(f)]
    if any(b < a for a, b in zip(vals, vals[1:])):
        raise ContractViolation(f"f is not nondecreasing: {vals}")
    return f


# ---------------------------------------------------------------------------
# Bound formulas
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BoundParams:
    beta: float = 0.4
    C: float = 1.0
    d: int = 2
    lam: float = 2.0

    def __post_init__(self):
        if not 0 < self.beta < 1:
            raise PreconditionError(f"beta must lie in (0, 1), got {self.beta}")
        if self.C <= 0 or self.d < 0 or self.lam <= 1:
            raise PreconditionError("need C > 0, d >= 0 and lambda > 1")

    def require_folner(self):
        if not self.beta < 0.5:
            raise PreconditionError(f"Følner bounds need beta < 1/2, got {self.beta}")


def slow_exponent(beta: float) -> float:
    return (2 * beta - 1) / (2 - 2 * beta)


def slow_window_factor(M: int, beta: float) -> float:
    return math.exp(M ** slow_exponent(beta))


def folner_ratio_bound(M: int, beta: float) -> float:
    return 2 * slow_window_factor(M, beta) - 2


def subexponential_bound(n: int, beta: float) -> float:
    """``exp(n^(beta/(1-beta)))``, the growth bound along the good subsequence."""
    return math.exp(n ** (beta / (1 - beta)))


def nilpotent_step_bound(d: int) -> int:
    """``floor((-1 + sqrt(8d - 7)) / 2)`` in exact integer arithmetic."""
    if d < 1:
        raise ValueError("d must be at least 1")
    return (math.isqrt(8 * d - 7) - 1) // 2


def _log(x) -> float:
    return math.log(x)


def find_slow_window(f: Sequence[int], k: int, beta: float) -> int | None:
    """Least ``M`` in ``[N/3, N-k]`` with ``f(M+k) <= f(M) exp(M^((2b-1)/(2-2b)))``.

    ``f`` lists ``f(1), ..., f(N)``.  Returns ``None`` if no such ``M``
    exists; precondition failures raise :class:`PreconditionError`.
    """
    N = len(f)
    if not beta < 0.5:
        raise PreconditionError(f"beta must be below 1/2, got {beta}", beta)
    if k < 1 or N - k < math.ceil(N / 3):
        raise PreconditionError(f"window [N/3, N-k] is empty for N={N}, k={k}", (N, k))
    for i, v in enumerate(f):
        if v < 1:
            raise PreconditionError(f"f({i + 1}) = {v} is not a positive integer", i + 1)
        if i and v < f[i - 1]:
            raise PreconditionError(f"f decreases at {i + 1}", i + 1)
    if _log(f[-1]) > N ** (beta / (1 - beta)) + TOL:
        raise PreconditionError(f"f(N) exceeds exp(N^(beta/(1-beta))) for N={N}", N)
    e = slow_exponent(beta)
    for M in range(math.ceil(N / 3), N - k + 1):
        if _log(f[M + k - 1]) <= _log(f[M - 1]) + M**e + TOL:
            return M
    return None


def slow_window_holds(f: Sequence[int], k: int, beta: float, M: int) -> bool:
    N = len(f)
    return (N / 3 <= M <= N - k
            and _log(f[M + k - 1]) <= _log(f[M - 1]) + M ** slow_exponent(beta) + TOL)


# ---------------------------------------------------------------------------
# Følner candidates
# ---------------------------------------------------------------------------


@dataclass
class FolnerCandidate:
    k: int
    M: int
    marked: MarkedWord
    representatives: list[Automorphism]
    group: list[Automorphism]
    elements: frozenset[Automorphism]
    stats: dict = field(default_factory=dict)
    mode: str = "empirical"
    beta: float | None = None

    def __len__(self):
        return len(self.elements)

    def __contains__(self, a):
        return a in self.elements


def _strict_plan(oracle: LanguageOracle, k: int, params: BoundParams, max_range: int) -> dict:
    beta = params.beta
    profile = oracle.complexity_series()
    D = oracle.stabilized_to
    scale = 4 ** (beta / (1 - beta))
    fits = [math.log(profile.P(n)) <= n**beta / scale + TOL for n in range(1, D + 1)]
    N = None
    for n in range(D, 0, -1):
        if not fits[n - 1]:
            N = n + 1
            break
    else:
        N = 1
    report = {
        "certified_depth": D,
        "beta": beta,
        "k": k,
        "complexity_bound": f"P(n) <= exp(n^beta / {scale:.6g})",
        "N_within_depth": N if N <= D else None,
        "note": "N must be certified for all n >= N; only the certified range can be inspected",
    }
    n_min = max(N, math.ceil(9 ** (1 / (1 - beta))), k + 1)
    report["n_min_for_R_ge_1"] = n_min
    if N > D or n_min > D:
        report["reason"] = "complexity bound or R >= 1 requires lengths beyond the certified depth"
        return report
    for n in range(n_min, D + 1):
        e = n ** (1 - beta)
        R = math.floor(e / 9)
        if R < 1 or not 6 * R < e:
            continue
        need = math.ceil(e)
        for w in oracle.sorted_factors(n):
            c = unique_extension_count(oracle, w)
            if c.right >= need and c.left >= need:
                wt_len = n + 12 * R
                report.update(n=n, R=R, word=w, marked_length=wt_len, stabilizer_range=wt_len // 2)
                if wt_len // 2 > max_range or 3 * R + k > max_range or 2 * wt_len > D:
                    report["reason"] = (f"stabilizer enumeration at range {wt_len // 2} or depth "
                                        f"{2 * wt_len} exceeds the desk-scale caps")
                else:
                    report["feasible"] = True
                return report
    report["reason"] = "no word of the required length extends uniquely n^(1-beta) times in range"
    return report


def folner_candidate(oracle: LanguageOracle, k: int, params: BoundParams | None = None,
                     mode: str = "empirical", *, R: int | None = None, M: int | None = None,
                     max_range: int = 12) -> FolnerCandidate:
    """Build ``F_k``: a union of ``f(M)`` left cosets of ``G`` for the step-2 marked word.

    Empirical mode takes ``R`` and ``M`` from the caller.  Strict mode
    derives them from the complexity bound and the slow-window search, and
    raises :class:`InfeasibleError` (carrying a report) when the literal
    constants are out of reach.
    """
    params = params or BoundParams()
    if mode == "strict":
        params.require_folner()
        plan = _strict_plan(oracle, k, params, max_range)
        if not plan.get("feasible"):
            raise InfeasibleError(plan.get("reason", "strict constants infeasible"), plan)
        R = plan["R"]
    elif mode != "empirical":
        raise ValueError(f"unknown mode {mode!r}")
    if R is None:
        raise PreconditionError("empirical mode needs R")
    marked = build_marked_word(oracle, R, "step2")
    S = 3 * R
    aut_sets = {n: enumerate_automorphisms(oracle, n, mode="propagate") for n in range(0, S + 1)}
    f = coset_counts(oracle, marked, aut_sets)
    f0 = len(images_of(marked, aut_sets[0], S))
    if mode == "strict":
        M = find_slow_window([f[n] for n in range(1, S + 1)], k, params.beta)
        if M is None or not R <= M <= S - k:
            raise ContractViolation(f"no slow window found for f = {f}")
        provenance = "find_slow_window"
    else:
        if M is None:
            raise PreconditionError("empirical mode needs M")
        provenance = "operator"
    if M < 0 or k < 0 or M + k > S:
        raise PreconditionError(f"need M + k <= 3R, got M={M}, k={k}, R={R}")
    f[0] = f0
    fM = f[M]

    group = g_w(oracle, marked.word)
    group_auts = automorphism_closure(group.automorphisms) or [identity(oracle)]

    reps: dict[str, Automorphism] = {}
    for a in aut_sets[M]:
        reps.setdefault(_promote(a, S).forward.rule.apply(marked.word), a)
    representatives = sorted(reps.values())
    if len(representatives) != fM:
        raise ContractViolation("representative count differs from f(M)")
    elements = frozenset(compose(phi, g).canonical() for phi in representatives for g in group_auts)
    for n in (M, k):
        for a in aut_sets[n]:
            if a not in elements:
                raise ContractViolation(f"{aut_id(a)} in Aut_{n} is not covered by F_k")
    cover_ok = f[S] <= oracle.complexity(marked.n + S)
    if not cover_ok:
        warnings.warn(f"f(3R) = {f[S]} exceeds P(|w|+3R) = {oracle.complexity(marked.n + S)}")

    stats = {
        "f": f,
        "f(M)": fM,
        "f(M+k)": f[M + k],
        "M_provenance": provenance,
        "marked_word": marked.word,
        "group_order": group.order,
        "|F|": len(elements),
        "|Aut_M|": len(aut_sets[M]),
        "|Aut_k|": len(aut_sets[k]),
        "f(3R)": f[S],
        "P(|w|+3R)": oracle.complexity(marked.n + S),
        "f(3R)<=P(|w|+3R)": cover_ok,
    }
    if M >= 1:
        stats["bound"] = folner_ratio_bound(M, params.beta)
    return FolnerCandidate(k, M, marked, representatives, group_auts, elements, stats, mode, params.beta)


def folner_ratio(F: FolnerCandidate, phi: Automorphism) -> Fraction:
    """Exact ``|F symmetric-difference phi F| / |F|``."""
    if phi.minimal_range > F.k:
        raise PreconditionError(f"{aut_id(phi)} is not in Aut_{F.k}")
    oracle = phi.oracle
    moved = set()
    for a in F.elements:
        if 2 * (phi.minimal_range + a.minimal_range) + 1 > oracle.stabilized_to:
            raise RangeError("composite range exceeds the certified windows")
        moved.add(compose(phi.canonical(), a).canonical())
    ratio = Fraction(len(F.elements ^ moved), len(F.elements))
    if F.mode == "strict" and F.M >= 1:
        if float(ratio) > folner_ratio_bound(F.M, F.beta) + TOL:
            raise ContractViolation(f"ratio {ratio} exceeds the bound at M={F.M}")
    return ratio


# ---------------------------------------------------------------------------
# Growth and torsion-free subgroups
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GrowthSeries:
    generators: tuple[str, ...]
    gamma: tuple[int, ...]

    def __post_init__(self):
        g = self.gamma
        for a, b in zip(g, g[1:]):
            if b < a:
                raise ContractViolation(f"growth series decreases: {g}")
        for m in range(1, len(g) + 1):
            for n in range(1, len(g) - m + 1):
                if g[m + n - 1] > g[m - 1] * g[n - 1]:
                    raise ContractViolation(f"gamma({m + n}) > gamma({m}) gamma({n})")

    def __getitem__(self, n: int) -> int:
        return self.gamma[n - 1]

    def log_growth(self) -> list[float]:
        """``log gamma(n) / n``; tends to zero for subexponential growth."""
        return [math.log(g) / n for n, g in enumerate(self.gamma, 1)]

    def rows(self):
        return list(enumerate(self.gamma, 1))


def subgroup_growth(generators: Sequence[Automorphism], N: int) -> GrowthSeries:
    """Ball sizes ``gamma(1..N)`` for a symmetric generating set, by breadth-first search."""
    gens = [g.canonical() for g in generators]
    if not gens:
        raise PreconditionError("need at least one generator")
    members = set(gens)
    for g in gens:
        if g.inv() not in members:
            raise PreconditionError(f"generating set is not symmetric: inverse of {aut_id(g)} missing", g)
    oracle = gens[0].oracle
    one = identity(oracle)
    ball, frontier, gamma = {one}, [one], []
    for _ in range(N):
        new = []
        for x in frontier:
            for g in gens:
                if 2 * (x.radius + g.radius) + 1 > oracle.stabilized_to:
                    raise RangeError(f"composite range {x.radius + g.radius} exceeds the certified windows")
                y = compose(x, g).canonical()
                if y not in ball:
                    ball.add(y)
                    new.append(y)
        frontier = new
        gamma.append(len(ball))
    return GrowthSeries(tuple(aut_id(g) for g in gens), tuple(gamma))


class InjectivityReport(NamedTuple):
    injective: bool
    witness: tuple[int, int] | None
    count: int
    bound: int


def torsion_free_injectivity_check(elements: Sequence[Automorphism], marked: MarkedWord,
                                   group: FiniteGroup | None = None) -> InjectivityReport:
    """Whether ``phi -> phi(marked word)`` is injective on ``elements``.

    When it is, the number of elements is at most ``P(|marked| - 2R)``.
    """
    R = marked.R * MODES[marked.mode] // 2
    oracle = marked_oracle(elements)
    imgs = [_promote(a, R).forward.rule.apply(marked.word) for a in elements]
    bound = oracle.complexity(len(marked.word) - 2 * R)
    seen: dict[str, int] = {}
    for i, img in enumerate(imgs):
        if img in seen:
            return InjectivityReport(False, (seen[img], i), len(elements), bound)
        seen[img] = i
    if len(elements) > bound:
        raise ContractViolation(f"{len(elements)} distinct images exceed P = {bound}")
    return InjectivityReport(True, None, len(elements), bound)


def marked_oracle(elements: Sequence[Automorphism]) -> LanguageOracle:
    if not elements:
        raise PreconditionError("no elements given")
    return elements[0].oracle
