import json
import subprocess
import sys

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bops.cli import main
from bops.errors import InvalidParameterError, ScenarioError
from bops.model import ModelParams
from bops.scenario import Scenario, parse_scenario, render_scenario

BASE = "p=10\nc=4\nc_o=4\nk=1\nM=7\n"


def scenario_text(**values):
    return "".join(f"{k} = {v}\n" for k, v in values.items())


@pytest.fixture
def write(tmp_path):
    def _write(text, name="s.txt"):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return str(path)

    return _write


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestParse:
    def test_default_valuation(self):
        assert parse_scenario("p=10\nc=4\nc_o=4\nk=1\nM=7") == Scenario(
            ModelParams(p=10, c=4, c_o=4, k=1, M=7, v=21)
        )

    def test_k_too_large(self):
        with pytest.raises(InvalidParameterError, match="k must satisfy 0 ≤ k < p"):
            parse_scenario("p=10\nc=4\nc_o=4\nk=12\nM=7")

    def test_delivery_fee_above_max_wait(self):
        with pytest.raises(InvalidParameterError, match="M > c_o"):
            parse_scenario("p=10\nc=4\nc_o=8\nk=1\nM=7")

    def test_comments_and_spacing(self):
        text = "# base case\n  p =  10   # price\n\nc=4\nc_o\t=\t4\nk=1\nM=7\nv = 30\n"
        assert parse_scenario(text).params == ModelParams(p=10, c=4, c_o=4, k=1, M=7, v=30)

    def test_overrides(self):
        s = parse_scenario(BASE + "q_steps = 50\nr = 0.3\nrule = independent-weekly\n")
        assert s.get("q_steps") == 50
        assert s.get("r") == 0.3
        assert s.get("rule") == "independent-weekly"
        assert s.get("seed") is None

    @pytest.mark.parametrize(
        "text, line",
        [
            (BASE + "x = 1\n", 6),
            ("p=10\np=11\nc=4\nc_o=4\nk=1\nM=7\n", 2),
            ("p=10\nc=four\nc_o=4\nk=1\nM=7\n", 2),
            ("p=10\nc=4\nc_o 4\nk=1\nM=7\n", 3),
            (BASE + "q_steps = 2.5\n", 6),
        ],
    )
    def test_errors_carry_line_numbers(self, text, line):
        with pytest.raises(ScenarioError, match=f"^line {line}: "):
            parse_scenario(text)

    def test_missing_keys(self):
        with pytest.raises(ScenarioError, match="M"):
            parse_scenario("p=10\nc=4\nc_o=4\nk=1\n")

    @settings(max_examples=200)
    @given(
        p=st.floats(1, 100),
        c_ratio=st.floats(0.01, 0.99),
        c_o=st.floats(0.1, 10),
        k_ratio=st.floats(0, 0.99),
        m_ratio=st.floats(1.01, 5),
        extra_v=st.floats(0, 10),
        overrides=st.fixed_dictionaries(
            {},
            optional={
                "q_steps": st.integers(2, 1000),
                "r": st.floats(0, 1),
                "seed": st.integers(0, 2**64 - 1),
                "rule": st.sampled_from(["leftover-from-store", "independent-weekly"]),
            },
        ),
    )
    def test_round_trip(self, p, c_ratio, c_o, k_ratio, m_ratio, extra_v, overrides):
        params = ModelParams(p=p, c=p * c_ratio, c_o=c_o, k=p * k_ratio, M=c_o * m_ratio)
        params = params.with_values(v=params.v + extra_v)
        try:
            params.validate()
        except InvalidParameterError:
            return
        scenario = Scenario(params, overrides)
        assert parse_scenario(render_scenario(scenario)) == scenario


class TestSolve:
    @pytest.mark.parametrize(
        "p, k, region, q, value",
        [
            (10, 1, "BOPS III", 0.0, 33.0),
            (10, 3, "Store I", 4.0, 24.0),
            (6, 3, "Store II", 2.25, 9.0),
        ],
    )
    def test_examples(self, capsys, write, p, k, region, q, value):
        code, out, _ = run(capsys, "solve", write(scenario_text(p=p, c=4, c_o=4, k=k, M=7)))
        assert code == 0
        report = json.loads(out)
        assert report["region"] == region
        assert report["q"] == pytest.approx(q, abs=1e-12)
        assert report["profit"] == pytest.approx(value, abs=1e-12)
        assert report["verification"] == {
            "consumer_ok": True,
            "argmax_ok": True,
            "fixed_point_residual": pytest.approx(0.0, abs=1e-12),
        }
        assert set(report) == {"region", "q", "mu_bar", "xi", "demand", "profit", "verification"}

    def test_invalid_scenario(self, capsys, write):
        code, out, err = run(capsys, "solve", write("p=10\nc=4\nc_o=4\nk=12\nM=7\n"))
        assert code == 2
        assert out == ""
        assert "k must satisfy 0 ≤ k < p" in err

    def test_missing_file(self, capsys, tmp_path):
        code, _, _ = run(capsys, "solve", str(tmp_path / "nope.txt"))
        assert code == 2

    def test_out_file(self, capsys, write, tmp_path):
        target = tmp_path / "out.json"
        code, out, _ = run(capsys, "solve", write(BASE), "--out", str(target))
        assert code == 0 and out == ""
        assert json.loads(target.read_text())["region"] == "BOPS III"


class TestRegionMap:
    def test_csv(self, capsys, write):
        code, out, _ = run(capsys, "region-map", write(BASE), "--x", "mu_bar:0:7:8", "--y", "p:10:10:1")
        assert code == 0
        lines = out.split("\n")
        assert lines[0] == "x,y,region"
        assert lines[-1] == ""
        assert [row.split(",")[2] for row in lines[1:-1]] == [
            "BOPS III",
            "BOPS III",
            "BOPS II",
            "BOPS I",
            "BOPS I",
            "Store I",
            "Store I",
            "Store I",
        ]
        assert lines[1].startswith("0.0,10.0,")

    def test_single_point(self, capsys, write):
        code, out, _ = run(capsys, "region-map", write(BASE), "--x", "mu_bar:0.5:0.5:1", "--y", "p:10:10:1")
        assert code == 0
        assert out == "x,y,region\n0.5,10.0,BOPS III\n"

    def test_invalid_points(self, capsys, write):
        code, out, _ = run(capsys, "region-map", write(BASE), "--x", "c:2:12:3", "--y", "k:0:0:1")
        assert code == 0
        assert out.splitlines()[-1] == "12.0,0.0,invalid"

    @pytest.mark.parametrize(
        "axis", ["v:0:1:3", "c:0:1", "c:a:1:3", "c:0:1:0", "c:1:0:3"]
    )
    def test_bad_axis(self, capsys, write, axis):
        code, out, _ = run(capsys, "region-map", write(BASE), "--x", axis, "--y", "k:0:1:2")
        assert code == 2
        assert out == ""

    def test_missing_axis_flag(self, capsys, write):
        with pytest.raises(SystemExit) as exc:
            main(["region-map", write(BASE), "--x", "c:1:2:2"])
        assert exc.value.code == 2


class TestVerify:
    def test_closed_form_passes(self, capsys, write):
        code, out, _ = run(capsys, "verify", write(BASE))
        assert code == 0
        assert out.rstrip().endswith("PASS")
        assert "region=BOPS III" in out

    def test_corrupted_stock_fails(self, capsys, write):
        code, out, _ = run(capsys, "verify", write(BASE), "--override", "q=1")
        assert code == 1
        assert "profit gap: 4.0 [FAIL]" in out
        assert out.rstrip().endswith("FAIL")

    def test_low_margin_bops_iii(self, capsys, write):
        code, out, _ = run(capsys, "verify", write(scenario_text(p=6, c=4, c_o=4, k=1, M=7)))
        assert code == 0
        assert "region=BOPS III" in out

    def test_coarse_grid(self, capsys, write):
        code, out, _ = run(capsys, "verify", write(BASE), "--grid", "50:60")
        assert code == 0
        assert "grid: 50x60" in out

    @pytest.mark.parametrize(
        "extra", [["--grid", "50"], ["--override", "xi=1"], ["--override", "q=abc"], ["--override", "mu_bar=8"]]
    )
    def test_bad_flags(self, capsys, write, extra):
        code, _, _ = run(capsys, "verify", write(BASE), *extra)
        assert code == 2


class TestSimulate:
    def test_no_leftovers(self, capsys):
        code, out, _ = run(capsys, "simulate", "--r", "0", "--weeks", "20", "--seed", "1")
        assert code == 0
        assert out == "week,store0,store1\n" + "".join(f"{w},S,S\n" for w in range(20))

    def test_stats_json(self, capsys):
        means = {}
        for r in ("0.1", "0.5"):
            code, out, _ = run(capsys, "simulate", "--r", r, "--reps", "1000")
            assert code == 0
            stats = json.loads(out)
            assert {"r", "mean_b_fraction", "std_error"} <= set(stats)
            means[r] = stats["mean_b_fraction"]
        assert means["0.5"] > means["0.1"]

    def test_identical_bytes(self, capsys):
        first = run(capsys, "simulate", "--r", "0.4", "--seed", "7")
        second = run(capsys, "simulate", "--r", "0.4", "--seed", "7")
        assert first == second

    def test_env_seed_overrides_flag(self, capsys, monkeypatch):
        _, from_flag, _ = run(capsys, "simulate", "--r", "0.4", "--seed", "3")
        monkeypatch.setenv("BOPS_SEED", "3")
        _, from_env, _ = run(capsys, "simulate", "--r", "0.4", "--seed", "99")
        assert from_env == from_flag
        monkeypatch.setenv("BOPS_SEED", "three")
        code, _, _ = run(capsys, "simulate", "--r", "0.4")
        assert code == 2

    def test_scenario_defaults(self, capsys, write):
        path = write(BASE + "r = 1\nweeks = 3\nrule = IndependentWeekly\n")
        code, out, _ = run(capsys, "simulate", "--scenario", path)
        assert code == 0
        assert out == "week,store0,store1\n0,S,S\n1,B,B\n2,B,B\n"
        # flags win over the scenario
        code, out, _ = run(capsys, "simulate", "--scenario", path, "--weeks", "2")
        assert out == "week,store0,store1\n0,S,S\n1,B,B\n"

    @pytest.mark.parametrize(
        "argv",
        [
            ["simulate"],
            ["simulate", "--r", "1.5"],
            ["simulate", "--r", "0.5", "--rule", "weekly"],
            ["simulate", "--r", "0.5", "--weeks", "0"],
        ],
    )
    def test_bad_input(self, capsys, argv):
        code, _, _ = run(capsys, *argv)
        assert code == 2


def test_module_entry_point(tmp_path):
    path = tmp_path / "s.txt"
    path.write_text(BASE)
    done = subprocess.run(
        [sys.executable, "-m", "bops", "solve", str(path)], capture_output=True, text=True
    )
    assert done.returncode == 0
    assert json.loads(done.stdout)["profit"] == 33.0


def test_unknown_command_exits_2():
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2
