import json
import subprocess
import sys

import pytest

from starkcl.cli import main
from starkcl.config import RunConfig


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def cache(tmp_path):
    return ["--cache-dir", str(tmp_path / "c")]


def test_classgroup_json(capsys, cache):
    code, out, _ = run(capsys, "classgroup", 229, *cache)
    assert code == 0
    rep = json.loads(out)
    assert rep["h"] == 3 and rep["divisors"] == [3] and rep["cache_hit"] is False
    assert rep["config"]["precision"] == 32


def test_classgroup_cache(capsys, cache):
    run(capsys, "classgroup", 3601, *cache)
    _, second, _ = run(capsys, "classgroup", 3601, *cache)
    _, third, _ = run(capsys, "classgroup", 3601, *cache)
    assert second == third
    assert json.loads(second)["cache_hit"] is True


def test_classgroup_bad_input(capsys, cache):
    code, out, err = run(capsys, "classgroup", 12, *cache)
    assert code == 2 and out == ""
    assert json.loads(err)["error"] == "NotSquareFree"


def test_invariant(capsys, cache):
    code, out, _ = run(capsys, "invariant", 101, 5, "--precision", 16, *cache)
    rep = json.loads(out)
    assert code == 0
    assert rep["paper_literal"]["zero_quotient"] is True
    assert rep["unit_realized"]["kappa"] == 0
    _, again, _ = run(capsys, "invariant", 101, 5, "--precision", 16, *cache)
    assert json.loads(again)["lseries_cache_hit"] is True


def test_invariant_not_split(capsys, cache):
    code, _, err = run(capsys, "invariant", 101, 3, *cache)
    assert code == 2 and json.loads(err)["error"] == "NotSplit"


def test_compare(capsys, cache):
    code, out, _ = run(capsys, "compare", 101, 229, *cache)
    rep = json.loads(out)
    assert code == 0 and rep["agreement"] is False
    assert {r["kappa5_claimed"] for r in rep["claimed_example"]} == {2, 4}
    _, out, _ = run(capsys, "compare", 101, 101, *cache)
    assert json.loads(out)["agreement"] is True


def test_walk(capsys, cache):
    code, out, _ = run(capsys, "walk", 229, *cache)
    rep = json.loads(out)
    assert code == 0 and rep["h"] == 3 and rep["character_match"]
    code, _, err = run(capsys, "walk", 5, *cache)
    assert code == 3 and json.loads(err)["error"] == "Trivial"


def test_lowerbound_csv(capsys, cache):
    code, out, _ = run(capsys, "lowerbound", 5, 79, 229, *cache)
    lines = out.strip().split("\n")
    assert code == 0 and lines[0].startswith("D,delta_exact_or_bound")
    assert lines[1].startswith("5,trivial")


def test_coleman(capsys, cache):
    code, out, _ = run(capsys, "coleman", 79, 3, "--precision", 12, *cache)
    rep = json.loads(out)
    assert code == 0
    assert rep["class_average"]["error"] == "PDividesClassNumber"
    assert len(rep["psi"]) == 3


def test_crypto_roundtrip(capsys, cache, tmp_path):
    key = tmp_path / "k.bin"
    ct = tmp_path / "c.bin"
    code, out, _ = run(capsys, "crypto", "keygen", 229, "--seed", 7, "--out", key, *cache)
    assert code == 0
    assert json.loads(out)["key_hex"] == key.read_bytes().hex()
    msg = "ab" * 32
    code, out, _ = run(capsys, "crypto", "encrypt", "--key", key, "--message", msg,
                       "--seed", 9, "--out", ct, *cache)
    assert json.loads(out)["c2"] == (
        "86ce9f2a55754dc6d9628383da537c98331afa38111ee1e9ceb021e8e81ca47b")
    code, out, _ = run(capsys, "crypto", "decrypt", "--key", key, "--ct", ct, *cache)
    assert json.loads(out)["message"] == msg


def test_crypto_non_cyclic(capsys, cache):
    code, _, err = run(capsys, "crypto", "keygen", 1105, *cache)
    assert code == 3 and json.loads(err)["error"] == "NonCyclicGroup"


def test_config_precedence():
    env = {"STARKCL_PRECISION": "40", "STARKCL_EPSILON": "0.2", "STARKCL_NO_CACHE": "yes"}
    cfg = RunConfig.from_sources({"precision": 48, "seed": None}, env)
    assert (cfg.precision, cfg.epsilon, cfg.no_cache, cfg.seed) == (48, 0.2, True, 0)
    assert RunConfig.from_sources({}, {}) == RunConfig()


def test_table_format(capsys, cache):
    code, out, _ = run(capsys, "classgroup", 229, "--format", "table", *cache)
    assert code == 0 and "divisors" in out and "{" not in out.split("\n")[0]


def test_module_entry_point(tmp_path):
    r = subprocess.run([sys.executable, "-m", "starkcl", "classgroup", "5", "--no-cache"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and json.loads(r.stdout)["h"] == 1
