import json
import os
import pathlib
import subprocess

import pytest

ROOT = pathlib.Path(__file__).resolve().parents[2]
DATA = ROOT / "data"
CLI = os.environ.get("ORIGAMI_CLI", str(ROOT / "build" / "origami"))

pytestmark = pytest.mark.skipif(not pathlib.Path(CLI).exists(), reason="CLI not built")


def run(*args):
    return subprocess.run([CLI, *map(str, args)], capture_output=True, text=True, cwd=DATA)


def test_profile_json_is_deterministic():
    a = run("traversal-profile", "id.2nt", "rev.2nt", "--max-len", "10", "--format", "json")
    b = run("traversal-profile", "id.2nt", "rev.2nt", "--max-len", "10", "--format", "json")
    assert a.returncode == 0
    assert a.stdout == b.stdout
    entries = json.loads(a.stdout)["entries"]
    assert entries[-1]["value"] == 5


def test_exit_codes():
    assert run("resync-bounded", "univ.rsync").returncode == 1
    assert run("resync-bounded", "identity.rsync").returncode == 0
    assert run("contains", "one_two.1nt", "one_two.1nt", "identity.rsync", "--max-len", "5").returncode == 0
    fails = run("contains", "id.2nt", "rev.2nt", "pm1.rsync", "--max-len", "3", "--format", "json")
    assert fails.returncode == 1
    assert json.loads(fails.stdout)["counterexample"]["origin"] == [1]
    assert run("rational-check", "block.rat", "block_top.graph", "block_bottom.graph").returncode == 0
    assert run("rational-check", "block.rat", "block_bottom.graph", "block_top.graph").returncode == 1
    assert run("bogus").returncode == 2
    bad = run("mso-compile", "x <")
    assert bad.returncode == 2
    assert "1:4" in bad.stderr


def test_reduction_files(tmp_path):
    assert run("gen-reduction", "halt2.tm", "--out-dir", tmp_path).returncode == 0
    assert (tmp_path / "tup.1nt").exists()
    ok = run("contains", tmp_path / "tdown.1nt", tmp_path / "tup.1nt", "reduction_shift.rsync", "--max-len", "2",
             "--max-output", "64", "--max-steps", "200")
    assert ok.returncode == 0
    assert run("check-domino", "halt2.tm", "i6 i5 i4 i2 i7 i10 i4").returncode == 0
    assert run("check-domino", "halt2.tm", "i6 i5 i4 i2 i7 i2").returncode == 1
