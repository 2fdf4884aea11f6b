import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest

from twomode import cli
from twomode import gaussian as g
from twomode import measures as ms
from twomode import states

from helpers import SF_EXAMPLE, sf_matrix


def run(*argv):
    out = io.StringIO()
    code = cli.main(list(argv), out=out)
    return code, out.getvalue()


def write_cov(path, m, **extra):
    doc = cli.covfile_dict(m)
    doc.update(extra)
    path.write_text(json.dumps(doc))
    return str(path)


def parse_text(text):
    return dict(line.split(" = ", 1) for line in text.strip().splitlines())


def make_report(tmp_path, *flags):
    code, text = run("make", *flags)
    assert code == 0
    path = tmp_path / "state.json"
    path.write_text(text)
    code, out = run("analyze", str(path), "--json")
    assert code == 0
    return json.loads(out)


class TestAnalyze:
    def test_vacuum(self, tmp_path):
        code, out = run("analyze", write_cov(tmp_path / "v.json", np.eye(4) / 2))
        rep = parse_text(out)
        assert code == 0
        assert rep["purity"] == "1"
        assert float(rep["von_neumann"]) == 0.0
        assert float(rep["mutual_information"]) == 0.0
        assert rep["separable"] == "true"

    def test_tmsv(self, tmp_path):
        code, out = run("analyze", write_cov(tmp_path / "t.json", states.tmsv(1.0)))
        rep = parse_text(out)
        assert abs(float(rep["von_neumann"])) <= 1e-9
        assert float(rep["mutual_information"]) == pytest.approx(3.23966, abs=1e-4)
        assert float(rep["log_negativity"]) == pytest.approx(2.0, abs=1e-9)
        assert float(rep["eof"]) == pytest.approx(1.61983, abs=1e-5)
        assert rep["pure"] == "true"

    def test_standard_form_example(self, tmp_path):
        code, out = run("analyze", write_cov(tmp_path / "s.json", sf_matrix(*SF_EXAMPLE)))
        rep = parse_text(out)
        assert float(rep["n_minus"]) == pytest.approx(0.93462, abs=1e-5)
        assert float(rep["n_plus"]) == pytest.approx(1.95614, abs=1e-5)
        assert float(rep["purity"]) == pytest.approx(0.13674, abs=1e-5)
        assert rep["eof"] == "none"

    def test_twelve_significant_digits(self, tmp_path):
        _, out = run("analyze", write_cov(tmp_path / "s.json", sf_matrix(*SF_EXAMPLE)))
        assert parse_text(out)["n_minus"] == f"{g.symplectic_eigenvalues(sf_matrix(*SF_EXAMPLE)).n_minus:.12g}"

    def test_bits(self, tmp_path):
        path = write_cov(tmp_path / "t.json", states.tmsv(1.0))
        nats = json.loads(run("analyze", path, "--json")[1])
        bits = json.loads(run("analyze", path, "--json", "--bits")[1])
        for key in cli.ENTROPIC_KEYS:
            assert bits[key] == pytest.approx(nats[key] / np.log(2), rel=1e-14)
        assert bits["purity"] == nats["purity"]
        assert bits["entropy_unit"] == "bits"

    def test_label_and_stdin(self, tmp_path, monkeypatch):
        doc = cli.covfile_dict(np.eye(4) / 2, label="ground")
        monkeypatch.setattr(sys, "stdin", io.StringIO(json.dumps(doc)))
        code, out = run("analyze", "-")
        assert code == 0
        assert parse_text(out)["label"] == "ground"

    def test_json_round_trip_is_lossless(self, tmp_path):
        path = write_cov(tmp_path / "r.json", states.random_valid(4)[0])
        report = cli.build_report(states.random_valid(4)[0])
        parsed = cli.parse_report_json(run("analyze", path, "--json")[1])
        for key, value in report.items():
            assert parsed[key] == value


class TestExitCodes:
    def test_unphysical_file(self, tmp_path, capsys):
        code, _ = run("analyze", write_cov(tmp_path / "u.json", np.diag([0.25, 0.25, 0.5, 0.5])))
        assert code == 2
        assert "-0.25" in capsys.readouterr().err

    def test_validate_unphysical(self, tmp_path):
        assert run("validate", write_cov(tmp_path / "u.json", np.diag([0.4, 0.4, 0.5, 0.5])))[0] == 2

    @pytest.mark.parametrize(
        "content",
        [
            "not json",
            "[1, 2]",
            json.dumps({"convention": "vacuum=1", "ordering": "x1,p1,x2,p2", "matrix": np.eye(4).tolist()}),
            json.dumps({"convention": "vacuum=1/2", "ordering": "x1,x2,p1,p2", "matrix": np.eye(4).tolist()}),
            json.dumps({"convention": "vacuum=1/2", "ordering": "x1,p1,x2,p2", "matrix": np.eye(3).tolist()}),
            json.dumps({"convention": "vacuum=1/2", "ordering": "x1,p1,x2,p2"}),
            json.dumps({"convention": "vacuum=1/2", "ordering": "x1,p1,x2,p2", "matrix": np.eye(4).tolist(), "x": 1}),
            json.dumps({"convention": "vacuum=1/2", "ordering": "x1,p1,x2,p2", "matrix": [["a"] * 4] * 4}),
        ],
    )
    def test_malformed(self, tmp_path, content):
        path = tmp_path / "bad.json"
        path.write_text(content)
        assert run("analyze", str(path))[0] == 3

    def test_asymmetric_matrix_is_malformed(self, tmp_path):
        m = np.eye(4) / 2
        m[0, 1] = 0.1
        assert run("analyze", write_cov(tmp_path / "a.json", m))[0] == 3

    def test_missing_file(self, tmp_path):
        assert run("analyze", str(tmp_path / "nope.json"))[0] == 3

    def test_usage_error(self):
        assert run("analyze")[0] == 3
        assert run("frobnicate")[0] == 3

    def test_spec_out_of_range(self):
        assert run("make", "--kind", "thermal", "--nbar", "-1")[0] == 4
        assert run("make", "--kind", "standard_form", "--a", "0.5", "--b", "0.5", "--c1", "0.4", "--c2", "0.4")[0] == 4
        assert run("make", "--kind", "random")[0] == 4

    def test_bad_sweep_ranges(self):
        assert run("sweep", "--kind", "tmsv", "--param", "r", "--range", "0:1")[0] == 3
        assert run("sweep", "--kind", "tmsv", "--param", "r", "--range", "a:1:0.1")[0] == 3
        assert run("sweep", "--kind", "tmsv", "--param", "r", "--range", "0:1:0")[0] == 4
        assert run("sweep", "--kind", "tmsv", "--param", "r", "--range", "1:0:0.1")[0] == 4
        assert run("sweep", "--kind", "tmsv", "--param", "kind", "--range", "0:1:0.1")[0] == 4

    def test_verify_breach(self):
        code, out = run("verify", "--kind", "thermal", "--nbar", "1", "--cutoff", "30", "--tol-entropy", "1e-12")
        assert code == 5
        assert "FAILED" in out

    def test_verify_cutoff_too_small(self):
        assert run("verify", "--kind", "thermal", "--nbar", "3", "--cutoff", "10")[0] == 4


class TestMakeValidate:
    def test_make_then_validate(self, tmp_path):
        code, text = run("make", "--kind", "tmsv", "--r", "0.5")
        assert code == 0
        path = tmp_path / "t.json"
        path.write_text(text)
        assert run("validate", str(path))[0] == 0

    def test_out_flag(self, tmp_path):
        path = tmp_path / "out.json"
        assert run("make", "--kind", "vacuum", "--out", str(path), "--label", "vac")[0] == 0
        m, label = cli.read_covfile(str(path))
        assert label == "vac"
        np.testing.assert_array_equal(m, np.eye(4) / 2)

    def test_deterministic(self):
        a = run("make", "--kind", "random", "--seed", "17")[1]
        b = run("make", "--kind", "random", "--seed", "17")[1]
        assert a == b
        assert a != run("make", "--kind", "random", "--seed", "18")[1]

    def test_random_matches_library(self):
        doc = json.loads(run("make", "--kind", "random", "--seed", "17", "--max-thermal", "0.7")[1])
        expected = states.random_valid(17, 0.7, 0.5)[0].matrix
        np.testing.assert_array_equal(np.array(doc["matrix"]), expected)

    def test_analyze_is_deterministic(self, tmp_path):
        path = write_cov(tmp_path / "r.json", states.random_valid(9)[0])
        assert run("analyze", path)[1] == run("analyze", path)[1]


class TestRoundTrip:
    """Constructor parameters recovered from the standard-form block of the report."""

    def test_vacuum(self, tmp_path):
        rep = make_report(tmp_path, "--kind", "vacuum")
        assert (rep["a"], rep["b"], rep["c1"], rep["c2"]) == (0.5, 0.5, 0.0, 0.0)

    def test_thermal(self, tmp_path):
        rep = make_report(tmp_path, "--kind", "thermal", "--nbar1", "0.7", "--nbar2", "1.9")
        assert rep["a"] - 0.5 == pytest.approx(0.7, abs=1e-9)
        assert rep["b"] - 0.5 == pytest.approx(1.9, abs=1e-9)

    def test_squeezed_thermal_photon_numbers(self, tmp_path):
        # local squeezings are removed by the standard form; only the photon numbers survive
        rep = make_report(tmp_path, "--kind", "squeezed_thermal", "--nbar1", "0.2", "--nbar2", "1.1", "--r1", "0.4", "--r2", "-0.9")
        assert rep["a"] - 0.5 == pytest.approx(0.2, abs=1e-9)
        assert rep["b"] - 0.5 == pytest.approx(1.1, abs=1e-9)
        assert abs(rep["c1"]) <= 1e-9 and abs(rep["c2"]) <= 1e-9

    @pytest.mark.parametrize("r", [0.05, 0.5, 1.3, 2.5])
    def test_tmsv(self, tmp_path, r):
        rep = make_report(tmp_path, "--kind", "tmsv", "--r", str(r))
        assert 0.5 * np.arctanh(rep["c1"] / rep["a"]) == pytest.approx(r, abs=1e-9)
        assert rep["c2"] == pytest.approx(-rep["c1"], abs=1e-9 * rep["a"])

    def test_tms_thermal(self, tmp_path):
        n1, n2, r = 0.3, 1.1, 0.6
        rep = make_report(tmp_path, "--kind", "tms_thermal", "--nbar1", str(n1), "--nbar2", str(n2), "--r", str(r))
        a, b, c1 = rep["a"], rep["b"], rep["c1"]
        r_back = 0.5 * np.arctanh(2 * c1 / (a + b))
        total = (a + b) / np.cosh(2 * r_back)
        diff = a - b
        assert r_back == pytest.approx(r, abs=1e-9)
        assert (total + diff) / 2 - 0.5 == pytest.approx(n1, abs=1e-9)
        assert (total - diff) / 2 - 0.5 == pytest.approx(n2, abs=1e-9)

    def test_standard_form(self, tmp_path):
        a, b, c1, c2 = SF_EXAMPLE
        rep = make_report(tmp_path, "--kind", "standard_form", "--a", str(a), "--b", str(b), "--c1", str(c1), "--c2", str(c2))
        np.testing.assert_allclose([rep["a"], rep["b"], rep["c1"], rep["c2"]], SF_EXAMPLE, atol=1e-9)

    def test_random_normal_modes(self, tmp_path):
        rep = make_report(tmp_path, "--kind", "random", "--seed", "5", "--max-thermal", "1.2")
        nu = states.random_valid(5, 1.2, 0.5)[2]
        assert rep["n_minus"] == pytest.approx(nu[0, 0], abs=1e-9)
        assert rep["n_plus"] == pytest.approx(nu[2, 2], abs=1e-9)


class TestSweep:
    def test_range_parser(self):
        assert cli.parse_range("0:1:0.25") == [0.0, 0.25, 0.5, 0.75, 1.0]
        assert len(cli.parse_range("0:2:0.1")) == 21
        assert cli.parse_range("0:0.95:0.5") == [0.0, 0.5]

    def test_tmsv_information_increases(self, tmp_path):
        out = tmp_path / "sweep.csv"
        assert run("sweep", "--kind", "tmsv", "--param", "r", "--range", "0:2:0.1", "--out", str(out))[0] == 0
        rows = list(csv.DictReader(out.open()))
        assert list(rows[0]) == list(cli.SWEEP_COLUMNS)
        assert len(rows) == 21
        info = [float(r["I"]) for r in rows]
        assert all(b > a for a, b in zip(info, info[1:]))
        assert float(rows[-1]["log_neg"]) == pytest.approx(4.0, abs=1e-9)
        assert float(rows[10]["eof"]) == pytest.approx(ms.eof_symmetric(states.tmsv(1.0)), abs=1e-10)

    def test_asymmetric_eof_column(self):
        code, text = run("sweep", "--kind", "thermal", "--param", "nbar2", "--range", "0:0.4:0.2", "--nbar1", "0.2")
        rows = list(csv.DictReader(io.StringIO(text)))
        assert code == 0
        assert [r["eof"] for r in rows] == ["nan", "0", "nan"]

    def test_unphysical_grid_point(self):
        code, _ = run("sweep", "--kind", "standard_form", "--param", "c1", "--range", "0:1:0.5", "--a", "0.5", "--b", "0.5")
        assert code == 4


class TestVerify:
    def test_thermal_high_cutoff(self):
        code, out = run("verify", "--kind", "thermal", "--nbar", "1", "--cutoff", "60")
        assert code == 0
        assert "verification passed" in out
        line = next(l for l in out.splitlines() if l.split() and l.split()[0] == "entropy")
        assert float(line.split()[3]) <= 1e-8

    def test_file(self, tmp_path):
        path = write_cov(tmp_path / "s.json", states.random_valid(11, 0.3, 0.3)[0])
        assert run("verify", path, "--cutoff", "20")[0] == 0

    def test_needs_input(self):
        assert run("verify")[0] == 3

    def test_corpus_prefix(self):
        code, out = run("verify", "--corpus", "--size", "1")
        assert code == 0
        assert "verification passed" in out


def test_module_entry_point():
    res = subprocess.run(
        [sys.executable, "-m", "twomode", "make", "--kind", "thermal", "--nbar", "1"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert res.returncode == 0
    assert json.loads(res.stdout)["matrix"][0][0] == 1.5
