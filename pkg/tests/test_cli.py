import json
import subprocess
import sys
from pathlib import Path

import pytest

from graphon_norms import io
from graphon_norms.cli import main

DATA = Path(__file__).resolve().parent.parent / "data"


def run(*argv):
    return main([str(a) for a in argv])


def payload(path):
    return io.load_report(path)["payload"]


class TestNorms:
    def test_constant(self, tmp_path, capsys):
        out = tmp_path / "r.json"
        assert run("norms", DATA / "constant_half.kernel", "--out", out) == 0
        p = payload(out)
        assert (p["cut_norm"], p["op_inf1"], p["op_22"], p["hs"]) == (0.5, 0.5, 0.5, 0.5)
        assert "cut_norm 0.5 exact" in capsys.readouterr().out

    def test_asymmetric(self, capsys):
        assert run("norms", DATA / "bad_asymmetric.kernel") == 2
        assert "values not symmetric" in capsys.readouterr().err

    def test_missing_file(self, tmp_path):
        assert run("norms", tmp_path / "missing.kernel") == 2

    def test_malformed(self, tmp_path, capsys):
        bad = tmp_path / "bad.kernel"
        bad.write_text(json.dumps({"weights": [1.0]}))
        assert run("norms", bad) == 2
        assert "values" in capsys.readouterr().err

    def test_exact_limit_dispatch(self, tmp_path):
        out = tmp_path / "r.json"
        assert run("norms", DATA / "big.kernel", "--exact-limit", 12, "--restarts", 5, "--out", out) == 0
        assert payload(out)["cut_method"] == "heuristic-lower-bound"

    def test_bad_flag_is_input_error(self):
        assert run("norms", DATA / "constant_half.kernel", "--tol", "-1") == 2

    def test_non_convergence_exit_code(self, tmp_path, monkeypatch):
        from graphon_norms import cli
        from graphon_norms.errors import NonConvergenceError

        def boom(*a, **k):
            raise NonConvergenceError("no", 1, 1.0)

        monkeypatch.setattr(cli, "full_norm_report", boom)
        assert run("norms", DATA / "constant_half.kernel") == 3


class TestVerify:
    def test_constant_slacks(self, tmp_path, capsys):
        out = tmp_path / "v.json"
        assert run("verify", DATA / "constant_half.kernel", "--out", out) == 0
        reports = payload(out)["instances"][0]["reports"]
        assert [e["slack"] for r in reports for e in r["entries"]] == [0, 1.5, 0, 0.5, 0, 1.5]
        assert "1/1 pass" in capsys.readouterr().out

    def test_random(self, tmp_path, capsys):
        out = tmp_path / "v.json"
        assert run("verify", "--random", 10, 200, "--seed", 7, "--out", out) == 0
        assert payload(out)["summary"]["passed"] == 200
        assert "200/200 pass" in capsys.readouterr().out

    def test_vacuous(self, capsys):
        assert run("verify", "--random", 0, 0) == 0
        assert "0/0 pass" in capsys.readouterr().out

    def test_falsified_exit_code(self, monkeypatch):
        from dataclasses import replace

        from graphon_norms import verify

        real = verify.full_norm_report

        def corrupted(k, config=None):
            r = real(k, config)
            return replace(r, op_inf1=4 * r.cut_norm + 1.0)

        monkeypatch.setattr(verify, "full_norm_report", corrupted)
        assert run("verify", DATA / "constant_half.kernel") == 4

    def test_no_input(self):
        assert run("verify") == 2

    def test_difference_family(self):
        assert run("verify", "--random", 6, 10, "--family", "difference") == 0


class TestHom:
    def test_triangle_constant(self, capsys):
        assert run("hom", DATA / "triangle.motif", DATA / "constant_half.kernel") == 0
        assert "t(F,W) 0.125" in capsys.readouterr().out

    def test_triangle_bipartite(self, capsys):
        assert run("hom", DATA / "triangle.motif", DATA / "bipartite.kernel") == 0
        assert "t(F,W) 0\n" in capsys.readouterr().out

    def test_edge_matches_errata(self, tmp_path):
        a, b = tmp_path / "h.json", tmp_path / "e.json"
        assert run("hom", DATA / "edge.motif", DATA / "product2.kernel", "--out", a) == 0
        assert run("errata", DATA / "product2.kernel", "--out", b) == 0
        assert payload(a)["density"] == payload(b)["t_c2"]

    def test_spectral_check(self, tmp_path):
        out = tmp_path / "h.json"
        assert run("hom", DATA / "c4.motif", DATA / "product2.kernel", "--spectral-check", "--out", out) == 0
        assert abs(payload(out)["difference"]) <= 1e-9

    def test_spectral_check_needs_cycle(self):
        assert run("hom", DATA / "edge.motif", DATA / "product2.kernel", "--spectral-check") == 2

    def test_general_kernel(self, capsys):
        assert run("hom", DATA / "triangle.motif", DATA / "signed.kernel") == 2
        assert "homomorphism density requires a graphon" in capsys.readouterr().err

    def test_budget(self):
        assert run("hom", DATA / "triangle.motif", DATA / "product2.kernel", "--max-blocks", 1) == 5


class TestErrata:
    def test_constant(self, tmp_path):
        out = tmp_path / "e.json"
        assert run("errata", DATA / "constant_half.kernel", "--out", out) == 0
        p = payload(out)
        assert (p["t_c2"], p["hs_squared"], p["gap"]) == (0.5, 0.25, 0.25)

    def test_zero(self, tmp_path):
        out = tmp_path / "e.json"
        assert run("errata", DATA / "zero.kernel", "--out", out) == 0
        p = payload(out)
        assert (p["t_c2"], p["hs_squared"], p["gap"]) == (0.0, 0.0, 0.0)

    def test_sampled(self, tmp_path):
        g = tmp_path / "g.json"
        assert run("sample", DATA / "product2.kernel", "--nodes", 20, "--seed", 3, "--out", g) == 0
        out = tmp_path / "e.json"
        assert run("errata", g, "--out", out) == 0
        assert abs(payload(out)["gap"]) <= 1e-12

    def test_general_kernel(self):
        assert run("errata", DATA / "signed.kernel") == 2


class TestGenSample:
    def test_constant(self, tmp_path):
        out = tmp_path / "c.kernel"
        assert run("gen", "--family", "constant", "--params", 0.5, "--resolution", 1, "--out", out) == 0
        k = io.load_kernel(out)
        assert k.values.tolist() == [[0.5]]

    def test_product(self, tmp_path):
        out = tmp_path / "p.kernel"
        assert run("gen", "--family", "product", "--resolution", 2, "--out", out) == 0
        assert io.load_kernel(out).values.tolist() == [[0.0625, 0.1875], [0.1875, 0.5625]]

    def test_unknown_family(self):
        assert run("gen", "--family", "nope") == 2

    def test_bad_params(self):
        assert run("gen", "--family", "constant", "--params", 2.0) == 2

    def test_sample_deterministic(self, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        for out in (a, b):
            assert run("sample", DATA / "product2.kernel", "--nodes", 4, "--seed", 1, "--out", out) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_sample_as_graphon_round_trip(self, tmp_path):
        out = tmp_path / "g.kernel"
        assert run("sample", DATA / "product2.kernel", "--nodes", 9, "--as-graphon", "--out", out) == 0
        k = io.load_kernel(out)
        assert k.n_blocks == 9
        back = tmp_path / "g2.kernel"
        assert run("gen", "--adjacency", out, "--out", back) == 2  # a kernel is not an adjacency file
        assert run("norms", out) == 0


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_emitted_files_reload(tmp_path, seed):
    g = tmp_path / "g.json"
    k = tmp_path / "k.kernel"
    assert run("sample", DATA / "product2.kernel", "--nodes", 7, "--seed", seed, "--out", g) == 0
    assert run("gen", "--adjacency", g, "--out", k) == 0
    for cmd in (["norms", k], ["errata", k], ["verify", k], ["hom", DATA / "triangle.motif", k]):
        report = tmp_path / f"{cmd[0]}.json"
        assert run(*cmd, "--out", report) == 0
        assert io.load_report(report)["kind"] == cmd[0]


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "graphon_norms", "errata", str(DATA / "constant_half.kernel")],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout.splitlines() == ["t_c2 0.5", "hs_squared 0.25", "gap 0.25"]
