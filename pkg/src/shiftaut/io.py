"""Configuration files, the on-disk factor cache and report serialization."""

from __future__ import annotations

import json
import logging
import os
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Any, Mapping, Sequence

import yaml

from .errors import SpecError
from .language import (
    LanguageOracle,
    SubshiftSpec,
    fibonacci,
    period_doubling,
    thue_morse,
    tribonacci,
)

log = logging.getLogger("shiftaut")

SCHEMA = "shiftaut-report/1"
CACHE_ENV = "SHIFTAUT_CACHE_DIR"

PRESETS = {
    "fibonacci": fibonacci,
    "thue_morse": thue_morse,
    "period_doubling": period_doubling,
    "tribonacci": tribonacci,
}


class ConfigError(SpecError):
    pass


def spec_from_value(value: Any) -> SubshiftSpec:
    """A spec from a preset name or a mapping of spec fields."""
    if isinstance(value, str):
        if value not in PRESETS:
            raise ConfigError(f"unknown preset {value!r}; choose from {sorted(PRESETS)}")
        return PRESETS[value]()
    if isinstance(value, Mapping):
        return SubshiftSpec.from_dict(value)
    raise ConfigError(f"spec must be a preset name or a mapping, got {type(value).__name__}")


def read_yaml(path: str | os.PathLike) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise ConfigError(f"cannot read {path}: {e.strerror}") from None
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as e:
        raise ConfigError(f"{path}: {e}") from None
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: top level must be a mapping")
    return data


def load_spec_file(path: str | os.PathLike) -> tuple[SubshiftSpec, dict]:
    """Read a config file; returns the subshift and the remaining parameters.

    A file either holds a ``spec`` entry next to run parameters, or is a
    bare spec mapping (it has a ``variant`` key).
    """
    data = read_yaml(path)
    if "variant" in data:
        return spec_from_value(data), {}
    if "spec" not in data:
        raise ConfigError(f"{path}: no 'spec' entry")
    params = dict(data)
    return spec_from_value(params.pop("spec")), params


@dataclass
class ExperimentConfig:
    spec: SubshiftSpec | None = None
    depth: int = 20
    range: int = 1
    k: int = 1
    M: int | None = None
    N: int = 10
    beta: float = 0.4
    d: int = 3
    lam: float = 2.0
    mode: str = "empirical"
    search: str = "propagate"
    cap: int = 1 << 20
    word: str | None = None
    generators: str = "shift"
    out: str | None = None
    format: str = "json"

    def __post_init__(self):
        self.validate()

    def validate(self):
        for name in ("depth", "N", "cap"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be positive, got {getattr(self, name)}")
        for name in ("range", "k", "d"):
            if getattr(self, name) < 0:
                raise ConfigError(f"{name} must be nonnegative, got {getattr(self, name)}")
        if self.M is not None and self.M < 0:
            raise ConfigError("M must be nonnegative")
        if not 0 < self.beta < 1:
            raise ConfigError(f"beta must lie in (0, 1), got {self.beta}")
        if not self.lam > 1:
            raise ConfigError(f"lambda must exceed 1, got {self.lam}")
        if self.mode not in ("strict", "empirical"):
            raise ConfigError(f"mode must be strict or empirical, got {self.mode!r}")
        if self.search not in ("exhaustive", "propagate"):
            raise ConfigError(f"search must be exhaustive or propagate, got {self.search!r}")
        if self.format not in ("json", "tsv"):
            raise ConfigError(f"format must be json or tsv, got {self.format!r}")

    @classmethod
    def build(cls, params: Mapping[str, Any]) -> "ExperimentConfig":
        names = {f.name for f in fields(cls)}
        params = {("lam" if k == "lambda" else k): v for k, v in params.items()}
        unknown = sorted(set(params) - names)
        if unknown:
            raise ConfigError(f"unknown config keys: {unknown}")
        try:
            return cls(**params)
        except TypeError as e:
            raise ConfigError(str(e)) from None


# ---------------------------------------------------------------------------
# Factor cache
# ---------------------------------------------------------------------------


def default_cache_dir() -> Path:
    env = os.environ.get(CACHE_ENV)
    if env:
        return Path(env)
    return Path(os.environ.get("XDG_CACHE_HOME", Path.home() / ".cache")) / "shiftaut"


class FactorCache:
    """Append-only text store of certified factor sets, one file per spec digest.

    Each line is ``n<TAB>word word ...``; a spec's file only ever gains new
    lengths.  Lookups succeed when every length up to the target is present.
    """

    def __init__(self, root: str | os.PathLike | None = None):
        self.root = Path(root) if root is not None else default_cache_dir()

    def path(self, spec: SubshiftSpec) -> Path:
        return self.root / f"{spec.digest()}.txt"

    def _read(self, path: Path) -> dict[int, frozenset[str]]:
        sets: dict[int, frozenset[str]] = {}
        if not path.exists():
            return sets
        for line in path.read_text().splitlines():
            if not line or line.startswith("#"):
                continue
            n, _, words = line.partition("\t")
            sets[int(n)] = frozenset(words.split())
        return sets

    def load(self, spec: SubshiftSpec, target: int) -> dict[int, frozenset[str]] | None:
        sets = self._read(self.path(spec))
        if all(n in sets for n in range(1, target + 1)):
            log.info("cache hit for %s up to length %d", spec.label(), target)
            return {n: sets[n] for n in range(1, target + 1)}
        return None

    def store(self, spec: SubshiftSpec, oracle: LanguageOracle) -> int:
        """Append lengths not yet stored; returns how many were added."""
        path = self.path(spec)
        have = self._read(path)
        new = [n for n in range(1, oracle.stabilized_to + 1) if n not in have]
        if not new:
            return 0
        self.root.mkdir(parents=True, exist_ok=True)
        with path.open("a") as fh:
            if not have:
                fh.write("# " + json.dumps(spec.to_dict(), sort_keys=True) + "\n")
            for n in new:
                fh.write(f"{n}\t{' '.join(oracle.sorted_factors(n))}\n")
        return len(new)

    def entries(self) -> list[tuple[str, int]]:
        if not self.root.exists():
            return []
        out = []
        for p in sorted(self.root.glob("*.txt")):
            sets = self._read(p)
            depth = 0
            while depth + 1 in sets:
                depth += 1
            out.append((p.stem, depth))
        return out

    def clear(self) -> int:
        removed = 0
        if self.root.exists():
            for p in self.root.glob("*.txt"):
                p.unlink()
                removed += 1
        return removed


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------


def _plain(x):
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        items = [_plain(v) for v in x]
        return sorted(items, key=repr) if isinstance(x, (set, frozenset)) else items
    if hasattr(x, "numerator") and not isinstance(x, (int, float, bool)):
        return f"{x.numerator}/{x.denominator}"
    return x


def render_json(report: Mapping) -> str:
    body = {"schema": SCHEMA, **_plain(dict(report))}
    return json.dumps(body, sort_keys=True, indent=2) + "\n"


def render_tsv(columns: Sequence[str], rows: Sequence[Sequence]) -> str:
    def cell(v):
        if v is None:
            return ""
        if isinstance(v, float):
            return repr(v)
        v = _plain(v)
        return json.dumps(v) if isinstance(v, (list, dict)) else str(v)

    lines = ["\t".join(columns)]
    lines += ["\t".join(cell(v) for v in row) for row in rows]
    return "\n".join(lines) + "\n"


def write_text(text: str, out: str | None) -> None:
    if out is None or out == "-":
        print(text, end="")
    else:
        Path(out).write_text(text)
