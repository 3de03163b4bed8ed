"""Command-line workbench.

Exit status: 0 on success, 1 when a checked invariant fails on an
instance, 2 on usage or configuration errors, 3 when a resource cap or the
certified depth is exceeded.
"""

from __future__ import annotations

import argparse
import logging
import sys

from . import block_codes as bc
from . import groups as ga
from . import language as lc
from .errors import (
    CapExceededError,
    ContractViolation,
    HorizonError,
    InfeasibleError,
    NotFoundError,
    NotInLanguageError,
    OutOfRangeError,
    PeriodicShiftError,
    PreconditionError,
    RangeError,
    SpecError,
)
from .io import (
    ExperimentConfig,
    FactorCache,
    load_spec_file,
    render_json,
    render_tsv,
    spec_from_value,
    write_text,
)

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3

log = logging.getLogger("shiftaut")


class Output:
    """A report: a JSON body plus the table used for TSV output."""

    def __init__(self, body: dict, columns=(), rows=()):
        self.body = body
        self.columns = list(columns)
        self.rows = [list(r) for r in rows]

    def render(self, fmt: str) -> str:
        if fmt == "tsv":
            return render_tsv(self.columns, self.rows)
        return render_json(self.body)


def _oracle(cfg: ExperimentConfig, target: int, cache: FactorCache | None):
    if cfg.spec is None:
        raise SpecError("this command needs --spec FILE or --preset NAME")
    oracle = lc.build_oracle(cfg.spec, target, cache=cache)
    if oracle.unstable:
        log.warning("oracle certified only to depth %d of %d", oracle.stabilized_to, target)
    return oracle


def _deepening(cfg: ExperimentConfig, start: int, cache, work, limit: int = 1280):
    """Run ``work(oracle)``, doubling the oracle depth whenever it runs out."""
    target = start
    while True:
        oracle = _oracle(cfg, target, cache)
        try:
            return work(oracle)
        except OutOfRangeError:
            if oracle.unstable or 2 * target > limit:
                raise
            log.info("depth %d insufficient, retrying at %d", target, 2 * target)
            target *= 2


def _spec_block(cfg: ExperimentConfig) -> dict:
    return {"description": cfg.spec.to_dict(), "digest": cfg.spec.digest()}


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def run_complexity(cfg: ExperimentConfig, cache=None) -> Output:
    N = cfg.depth
    oracle = _oracle(cfg, 4 * N + 8, cache)
    N = min(N, oracle.stabilized_to)
    profile = oracle.complexity_series()
    flag = lc.detect_eventual_periodicity(profile)
    periodic = flag.flagged or cfg.spec.variant == "periodic"
    rows = []
    for n in range(1, N + 1):
        kn = None
        if not periodic:
            kn = lc.k_n(oracle, n)
        try:
            dn = lc.doubling_time(profile, n)
        except HorizonError:
            dn = None
        rows.append([n, profile.P(n), kn, dn])
    growth = lc.growth_diagnostics(profile, beta=cfg.beta, d=cfg.d) if len(profile) >= 3 else None
    body = {
        "command": "complexity",
        "spec": _spec_block(cfg),
        "certified_depth": oracle.stabilized_to,
        "rows": [dict(zip(("n", "P", "k_n", "d_n"), r)) for r in rows],
        "flags": {"periodic": periodic, "periodic_from": flag.n, "unstable": oracle.unstable},
    }
    if growth is not None:
        body["growth"] = {
            "beta": cfg.beta,
            "d": cfg.d,
            "log_ratio_tail_sup": growth.log_tail_sup[0],
            "poly_ratio_tail_sup": growth.poly_tail_sup[0],
        }
    return Output(body, ["n", "P", "k_n", "d_n"], rows)


def run_extensions(cfg: ExperimentConfig, cache=None) -> Output:
    n = cfg.depth
    oracle = _oracle(cfg, 4 * n + 8, cache)
    words = [cfg.word] if cfg.word else oracle.sorted_factors(n)
    rows = []
    for w in words:
        c = lc.unique_extension_count(oracle, w)
        rows.append([w, c.right, c.left, c.right_capped, c.left_capped])
    body = {
        "command": "extensions",
        "spec": _spec_block(cfg),
        "certified_depth": oracle.stabilized_to,
        "rows": [dict(zip(("word", "right", "left", "right_capped", "left_capped"), r)) for r in rows],
    }
    if not cfg.word:
        try:
            detail = lc.k_n_detail(oracle, n)
            body["k_n"] = {"n": n, "value": detail.value, "lower_bound": detail.lower_bound, "word": detail.word}
        except PeriodicShiftError as e:
            body["k_n"] = {"n": n, "value": None, "reason": str(e)}
    return Output(body, ["word", "right", "left", "right_capped", "left_capped"], rows)


def _enumerate(oracle, R, cfg):
    return bc.enumerate_automorphisms(oracle, R, mode=cfg.search, cap=cfg.cap)


def run_automorphisms(cfg: ExperimentConfig, cache=None) -> Output:
    R = cfg.range
    oracle = _oracle(cfg, max(bc.default_depth(R), cfg.depth), cache)
    counts, rows = {}, []
    auts = []
    for r in range(R + 1):
        auts = _enumerate(oracle, r, cfg)
        counts[r] = len(auts)
        rows.append([r, len(auts), bc.candidate_count(oracle, r)])
    body = {
        "command": "automorphisms",
        "spec": _spec_block(cfg),
        "search": cfg.search,
        "counts": counts,
        "automorphisms": [dict(a.to_dict(), id=ga.aut_id(a)) for a in auts],
    }
    return Output(body, ["R", "count", "candidates"], rows)


def run_group(cfg: ExperimentConfig, cache=None) -> Output:
    return _deepening(cfg, max(cfg.depth, 60), cache, lambda oracle: _group_report(cfg, oracle))


def _group_report(cfg: ExperimentConfig, oracle) -> Output:
    R = cfg.range
    body: dict = {"command": "group", "spec": _spec_block(cfg)}
    marked = None
    if cfg.word:
        w = cfg.word
    else:
        marked = ga.build_marked_word(oracle, R, "step1")
        w = marked.word
        body["marked"] = {"core": marked.core, "extension": marked.extension, "word": w}
    group = ga.g_w(oracle, w)
    rd = group.return_data
    profile = oracle.complexity_series()
    order_checks = {ga.aut_id(a): ga.order_divisibility_check(a, rd, profile) for a in group.automorphisms}
    if not all(order_checks.values()):
        raise ContractViolation(f"an element of S_w has order not dividing P(K_w)!: {order_checks}")
    body.update({
        "w": w,
        "K_w": rd.K_w,
        "U_w": list(rd.return_words),
        "|U_w|": rd.size,
        "S_w": [ga.aut_id(a) for a in group.automorphisms],
        "|G_w|": group.order,
        "order_divides": order_checks,
    })
    rows = [["K_w", rd.K_w], ["|U_w|", rd.size], ["|S_w|", len(group.automorphisms)], ["|G_w|", group.order]]
    if marked is not None:
        auts = _enumerate(oracle, R, cfg)
        report = ga.coset_condition_check(auts, marked, group)
        if not report.holds:
            raise ContractViolation(f"image and coset partitions differ: {report}")
        body["partitions"] = {"holds": report.holds, "image": report.image_partition,
                              "coset": report.coset_partition}
        rows.append(["partitions_equal", report.holds])
    return Output(body, ["quantity", "value"], rows)


def run_folner(cfg: ExperimentConfig, cache=None) -> Output:
    M = cfg.M if cfg.M is not None else cfg.k + 1
    params = ga.BoundParams(beta=cfg.beta, d=max(cfg.d, 0), lam=cfg.lam)
    return _deepening(cfg, max(cfg.depth, 100), cache, lambda oracle: _folner_report(cfg, oracle, params, M))


def _folner_report(cfg: ExperimentConfig, oracle, params, M) -> Output:
    k, R = cfg.k, cfg.range
    body: dict = {"command": "folner", "spec": _spec_block(cfg), "mode": cfg.mode, "k": k}
    try:
        F = ga.folner_candidate(oracle, k, params, cfg.mode, R=R, M=M)
    except InfeasibleError as e:
        body.update(feasible=False, reason=str(e), report=e.report)
        rows = sorted(e.report.items())
        return Output(body, ["key", "value"], rows)
    ratios = []
    for phi in _enumerate(oracle, k, cfg):
        ratios.append([ga.aut_id(phi), ga.folner_ratio(F, phi)])
    body.update({
        "feasible": True,
        "M": F.M,
        "R": F.marked.R,
        "marked": F.marked.word,
        "representatives": [ga.aut_id(a) for a in F.representatives],
        "F": sorted(ga.aut_id(a) for a in F.elements),
        "stats": F.stats,
        "ratios": {name: r for name, r in ratios},
    })
    if F.M >= 1:
        body["bound"] = ga.folner_ratio_bound(F.M, cfg.beta)
    return Output(body, ["automorphism", "ratio"], ratios)


def _growth_generators(oracle, spec: str):
    gens = set()
    for item in spec.split(","):
        item = item.strip()
        if item == "shift":
            gens.update([bc.shift_power(oracle, 1), bc.shift_power(oracle, -1)])
        elif item == "symbols":
            gens.update(a for a in bc.enumerate_automorphisms(oracle, 0) if a != bc.identity(oracle))
        elif item == "identity":
            gens.add(bc.identity(oracle))
        elif item.startswith("aut:"):
            gens.update(bc.enumerate_automorphisms(oracle, int(item[4:]), mode="propagate"))
        else:
            raise SpecError(f"unknown generator family {item!r}; use shift, symbols, identity or aut:R")
    return sorted(gens)


def run_growth(cfg: ExperimentConfig, cache=None) -> Output:
    N = cfg.N
    oracle = _oracle(cfg, max(cfg.depth, 2 * N + 9), cache)
    gens = _growth_generators(oracle, cfg.generators)
    series = ga.subgroup_growth(gens, N)
    logs = series.log_growth()
    rows = [[n, g, logs[n - 1]] for n, g in series.rows()]
    body = {
        "command": "growth",
        "spec": _spec_block(cfg),
        "generators": list(series.generators),
        "gamma": list(series.gamma),
        "log_gamma_over_n": logs,
    }
    return Output(body, ["n", "gamma", "log_gamma_over_n"], rows)


def run_bounds(cfg: ExperimentConfig, cache=None) -> Output:
    b, lam, n = cfg.beta, cfg.lam, cfg.depth
    rows = [
        ["nilpotent_step_bound", cfg.d, ga.nilpotent_step_bound(cfg.d)] if cfg.d >= 1 else None,
        ["reference_doubling_time", n, lc.reference_doubling_time(n, b, lam)],
        ["reference_doubling_asymptotic", n, lc.reference_doubling_asymptotic(n, b, lam)],
        ["subexponential_bound", n, ga.subexponential_bound(n, b)],
    ]
    if b < 0.5:
        rows.append(["slow_window_factor", n, ga.slow_window_factor(n, b)])
        rows.append(["folner_ratio_bound", n, ga.folner_ratio_bound(n, b)])
    rows = [r for r in rows if r is not None]
    body = {
        "command": "bounds",
        "beta": b,
        "lambda": lam,
        "d": cfg.d,
        "n": n,
        "values": {name: value for name, _, value in rows},
    }
    return Output(body, ["quantity", "argument", "value"], rows)


COMMANDS = {
    "complexity": run_complexity,
    "extensions": run_extensions,
    "automorphisms": run_automorphisms,
    "group": run_group,
    "folner": run_folner,
    "growth": run_growth,
    "bounds": run_bounds,
}


# ---------------------------------------------------------------------------
# Argument handling
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--spec", metavar="FILE", help="config file holding a subshift spec and parameters")
    common.add_argument("--preset", help="fibonacci, thue_morse, period_doubling or tribonacci")
    common.add_argument("--range", type=int, dest="range", metavar="R")
    common.add_argument("--depth", type=int, metavar="M", help="lengths to tabulate or certify")
    common.add_argument("--beta", type=float, metavar="B")
    common.add_argument("--d", type=int, metavar="D")
    common.add_argument("--lambda", type=float, dest="lam", metavar="L")
    common.add_argument("--mode", choices=["strict", "empirical"])
    common.add_argument("--search", choices=["exhaustive", "propagate"])
    common.add_argument("--k", type=int)
    common.add_argument("--M", type=int, dest="M")
    common.add_argument("--N", type=int, dest="N", help="number of growth steps")
    common.add_argument("--word")
    common.add_argument("--generators", help="comma list of shift, symbols, identity, aut:R")
    common.add_argument("--out", metavar="PATH")
    common.add_argument("--format", choices=["tsv", "json"])
    common.add_argument("--cap", type=int, metavar="N")
    common.add_argument("--cache-dir", help="factor cache directory")
    common.add_argument("--no-cache", action="store_true")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="shiftaut", description="Symbolic dynamics workbench")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    cache = sub.add_parser("cache", parents=[common], help="inspect or manage the factor cache")
    cache.add_argument("action", choices=["list", "path", "clear", "warm"])
    return parser


PARAM_KEYS = ("range", "depth", "beta", "d", "lam", "mode", "search", "k", "M", "N", "word",
              "generators", "out", "format", "cap")


def make_config(args: argparse.Namespace) -> ExperimentConfig:
    params: dict = {}
    if args.spec:
        spec, file_params = load_spec_file(args.spec)
        params.update(file_params)
        params["spec"] = spec
    if args.preset:
        params["spec"] = spec_from_value(args.preset)
    for key in PARAM_KEYS:
        value = getattr(args, key, None)
        if value is not None:
            params[key] = value
    return ExperimentConfig.build(params)


def run_cache(args, cfg: ExperimentConfig, cache: FactorCache) -> int:
    if args.action == "path":
        print(cache.root)
    elif args.action == "list":
        for digest, depth in cache.entries():
            print(f"{digest}\t{depth}")
    elif args.action == "clear":
        print(f"removed {cache.clear()} entries")
    else:
        oracle = _oracle(cfg, cfg.depth, None)
        added = cache.store(cfg.spec, oracle)
        print(f"{cfg.spec.digest()}\t{oracle.stabilized_to}\tadded {added}")
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        cfg = make_config(args)
        cache = FactorCache(args.cache_dir)
        if args.command == "cache":
            return run_cache(args, cfg, cache)
        out = COMMANDS[args.command](cfg, None if args.no_cache else cache)
        write_text(out.render(cfg.format), cfg.out)
        return EXIT_OK
    except ContractViolation as e:
        print(f"invariant failed: {e}", file=sys.stderr)
        return EXIT_VIOLATION
    except (CapExceededError, OutOfRangeError, HorizonError, RangeError, NotFoundError) as e:
        print(f"limit reached: {e}", file=sys.stderr)
        estimate = getattr(e, "estimate", None)
        if estimate is not None:
            print(f"estimated candidates: {estimate}", file=sys.stderr)
        return EXIT_CAP
    except (SpecError, PreconditionError, PeriodicShiftError, NotInLanguageError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
