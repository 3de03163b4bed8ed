import json

import pytest

from shiftaut.cli import main
from shiftaut.io import ConfigError, ExperimentConfig, FactorCache, load_spec_file
from shiftaut.language import build_oracle, fibonacci, thue_morse


@pytest.fixture(autouse=True)
def cache_dir(tmp_path, monkeypatch):
    monkeypatch.setenv("SHIFTAUT_CACHE_DIR", str(tmp_path / "cache"))
    return tmp_path / "cache"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


class TestConfig:
    def test_nested_file(self, tmp_path):
        path = write(tmp_path, "c.yaml", "spec:\n  variant: substitution\n  rules: {'0': '01', '1': '0'}\nrange: 2\n")
        spec, params = load_spec_file(path)
        assert spec.digest() == fibonacci().digest()
        assert params == {"range": 2}

    def test_bare_spec_and_preset(self, tmp_path):
        spec, params = load_spec_file(write(tmp_path, "s.yaml", "variant: periodic\nword: '011'\n"))
        assert spec.variant == "periodic" and params == {}
        spec, _ = load_spec_file(write(tmp_path, "p.yaml", "spec: thue_morse\n"))
        assert spec == thue_morse()

    def test_validation(self):
        with pytest.raises(ConfigError):
            ExperimentConfig(beta=1.5)
        with pytest.raises(ConfigError):
            ExperimentConfig(cap=0)
        with pytest.raises(ConfigError):
            ExperimentConfig.build({"colour": 1})
        assert ExperimentConfig.build({"lambda": 3.0}).lam == 3.0


class TestCache:
    def test_roundtrip(self, tmp_path):
        cache = FactorCache(tmp_path / "c")
        o = build_oracle(thue_morse(), 20, cache=cache)
        assert cache.entries() == [(thue_morse().digest(), o.stabilized_to)]
        again = build_oracle(thue_morse(), 15, cache=cache)
        assert all(again.factors(n) == o.factors(n) for n in range(1, 16))
        assert cache.store(thue_morse(), o) == 0

    def test_append_only(self, tmp_path):
        cache = FactorCache(tmp_path / "c")
        build_oracle(fibonacci(), 10, cache=cache)
        before = cache.path(fibonacci()).read_text()
        build_oracle(fibonacci(), 20, cache=cache)
        after = cache.path(fibonacci()).read_text()
        assert after.startswith(before) and len(after) > len(before)

    def test_env_override(self, cache_dir):
        assert FactorCache().root == cache_dir


class TestCommands:
    def test_complexity_tsv(self, capsys):
        code, out, _ = run(capsys, "complexity", "--preset", "fibonacci", "--depth", "20", "--format", "tsv")
        assert code == 0
        lines = out.splitlines()
        assert lines[0].split("\t") == ["n", "P", "k_n", "d_n"]
        assert [int(line.split("\t")[1]) for line in lines[1:]] == list(range(2, 22))

    def test_complexity_json_deterministic(self, capsys):
        _, a, _ = run(capsys, "complexity", "--preset", "thue_morse", "--depth", "10")
        _, b, _ = run(capsys, "complexity", "--preset", "thue_morse", "--depth", "10")
        assert a == b
        body = json.loads(a)
        assert body["schema"] == "shiftaut-report/1"
        assert body["rows"][2] == {"n": 3, "P": 6, "k_n": 1, "d_n": 2}
        assert body["flags"]["periodic"] is False

    def test_periodic_flag(self, capsys, tmp_path):
        path = write(tmp_path, "p.yaml", "spec:\n  variant: periodic\n  word: '01'\ndepth: 5\n")
        code, out, _ = run(capsys, "complexity", "--spec", path)
        body = json.loads(out)
        assert code == 0 and body["flags"]["periodic"] is True and body["flags"]["periodic_from"] == 1

    def test_malformed_config(self, capsys, tmp_path):
        code, _, err = run(capsys, "complexity", "--spec", write(tmp_path, "bad.yaml", "spec: [\n"))
        assert code == 2 and "bad.yaml" in err
        code, _, _ = run(capsys, "complexity", "--spec", write(tmp_path, "bad2.yaml", "spec: {variant: nope}\n"))
        assert code == 2

    def test_missing_spec(self, capsys):
        assert run(capsys, "complexity")[0] == 2

    def test_usage_error(self):
        with pytest.raises(SystemExit) as exc:
            main(["complexity", "--format", "xml"])
        assert exc.value.code == 2

    def test_automorphisms(self, capsys):
        code, out, _ = run(capsys, "automorphisms", "--preset", "thue_morse", "--range", "1")
        body = json.loads(out)
        assert code == 0 and body["counts"] == {"0": 2, "1": 6}
        code, out, _ = run(capsys, "automorphisms", "--preset", "fibonacci", "--range", "0")
        assert json.loads(out)["counts"] == {"0": 1}

    def test_cap(self, capsys):
        code, _, err = run(capsys, "automorphisms", "--preset", "thue_morse", "--range", "2",
                           "--search", "exhaustive", "--cap", "100")
        assert code == 3 and "4096" in err

    def test_group(self, capsys):
        code, out, _ = run(capsys, "group", "--preset", "fibonacci", "--range", "1")
        body = json.loads(out)
        assert code == 0 and body["partitions"]["holds"] is True and body["|G_w|"] == 1

    def test_group_word(self, capsys):
        code, out, _ = run(capsys, "group", "--preset", "thue_morse", "--word", "0")
        assert code == 0 and json.loads(out)["K_w"] == 3

    def test_folner(self, capsys):
        code, out, _ = run(capsys, "folner", "--preset", "fibonacci", "--k", "1", "--range", "1", "--M", "2")
        body = json.loads(out)
        assert code == 0 and sorted(body["ratios"].values()) == ["0/1", "2/5", "2/5"]

    def test_folner_strict(self, capsys):
        code, out, _ = run(capsys, "folner", "--preset", "fibonacci", "--mode", "strict", "--format", "tsv")
        assert code == 0 and "reason" in out

    def test_growth(self, capsys):
        code, out, _ = run(capsys, "growth", "--preset", "thue_morse", "--generators", "shift,symbols",
                           "--N", "3", "--format", "tsv")
        assert code == 0
        assert [line.split("\t")[1] for line in out.splitlines()[1:]] == ["4", "8", "12"]

    def test_bounds(self, capsys):
        code, out, _ = run(capsys, "bounds", "--d", "3")
        assert code == 0 and json.loads(out)["values"]["nilpotent_step_bound"] == 1

    def test_out_file(self, capsys, tmp_path):
        target = tmp_path / "r.tsv"
        assert run(capsys, "bounds", "--d", "7", "--format", "tsv", "--out", str(target))[0] == 0
        assert "nilpotent_step_bound\t7\t3" in target.read_text()

    def test_cache_commands(self, capsys, cache_dir):
        assert run(capsys, "cache", "warm", "--preset", "fibonacci", "--depth", "12")[0] == 0
        code, out, _ = run(capsys, "cache", "list")
        assert code == 0 and out.startswith(fibonacci().digest())
        _, out, _ = run(capsys, "cache", "path")
        assert out.strip() == str(cache_dir)
        _, out, _ = run(capsys, "cache", "clear")
        assert "removed 1" in out

    def test_invariant_failure_exit_status(self, capsys, monkeypatch):
        from shiftaut import groups
        from shiftaut.groups import CosetReport

        monkeypatch.setattr(groups, "coset_condition_check", lambda *a: CosetReport(False, [["a"]], [["b"]]))
        code, _, err = run(capsys, "group", "--preset", "fibonacci", "--range", "1")
        assert code == 1 and "invariant failed" in err
