"""Command line surface: flags, printed lines, exit codes, report files.

Exit-code contract frozen here: 0 clean, 2 obstruction found (negative
beta or Ding, violated volume bound), 1 configuration or computational
failure.  Scans prefer 2 over 1 when both apply.
"""

import json

import pytest

from fanokit.cli import main
from fanokit.config import (RunConfig, resolve_model, resolve_sequence,
                            resolve_subscheme)
from fanokit.errors import ConfigError
from fanokit.model import build_model, catalog_model
from fanokit.reportio import model_to_dict


@pytest.fixture()
def run(capsys):
    def _run(*argv):
        code = main(list(argv))
        captured = capsys.readouterr()
        return code, captured.out, captured.err

    return _run


@pytest.fixture(scope="module")
def p116_path(tmp_path_factory):
    """Model file for the weighted plane P(1,1,6), which violates the bound."""
    X = build_model(2, ((1, 0), (0, 1), (-1, -6)), name="P116")
    path = tmp_path_factory.mktemp("models") / "p116.json"
    path.write_text(json.dumps(model_to_dict(X)))
    return str(path)


class TestRunConfig:
    def test_defaults(self):
        config = RunConfig()
        assert config.k_max == 10
        assert config.r_list == (1, 2, 4, 8)
        assert config.workers is None

    def test_caps_must_be_positive(self):
        with pytest.raises(ConfigError):
            RunConfig(k_max=0)
        with pytest.raises(ConfigError):
            RunConfig(generator_cap=-5)
        with pytest.raises(ConfigError):
            RunConfig(r_list=())
        with pytest.raises(ConfigError):
            RunConfig(workers=0)

    def test_from_file(self, tmp_path):
        path = tmp_path / "c.json"
        path.write_text('{"k_max": 4, "r_list": [1, 3]}')
        config = RunConfig.from_file(str(path))
        assert config.k_max == 4
        assert config.r_list == (1, 3)

    def test_from_file_rejects_unknown_keys(self, tmp_path):
        path = tmp_path / "c.json"
        path.write_text('{"kmax": 4}')
        with pytest.raises(ConfigError, match="unknown config keys"):
            RunConfig.from_file(str(path))

    def test_from_file_rejects_bad_json(self, tmp_path):
        path = tmp_path / "c.json"
        path.write_text("[1, 2]")
        with pytest.raises(ConfigError, match="JSON object"):
            RunConfig.from_file(str(path))
        with pytest.raises(ConfigError, match="cannot read"):
            RunConfig.from_file(str(tmp_path / "absent.json"))

    def test_overrides_ignore_none(self):
        config = RunConfig(k_max=4).with_overrides(k_max=None, workers=2)
        assert config.k_max == 4
        assert config.workers == 2


class TestResolvers:
    def test_catalog_name(self):
        assert resolve_model("P1xP2").name == "P1xP2"

    def test_model_file(self, p116_path):
        X = resolve_model(p116_path)
        assert X.r0 == 3

    def test_bad_model_source_lists_catalog(self):
        with pytest.raises(ConfigError, match="P1, P112, .*existing file"):
            resolve_model("Q7")

    def test_subscheme_shorthands(self):
        X = catalog_model("P112")
        assert resolve_subscheme(X, "point@0").label == "point@0"
        assert resolve_subscheme(X, "point2@0").label == "point2@0"
        Z = resolve_subscheme(X, "divisor@-1,-2")
        assert Z.boundary_ray == (-1, -2)
        with pytest.raises(ConfigError, match="shorthand"):
            resolve_subscheme(X, "blowup@0")

    def test_subscheme_file_dimension_check(self, tmp_path):
        X2, X3 = catalog_model("P2"), catalog_model("P3")
        path = tmp_path / "z.json"
        from fanokit.reportio import subscheme_to_dict
        from fanokit.subscheme import point_subscheme

        path.write_text(json.dumps(subscheme_to_dict(point_subscheme(X2, 0))))
        assert resolve_subscheme(X2, str(path)).chart_gens
        with pytest.raises(ConfigError, match="dimension"):
            resolve_subscheme(X3, str(path))

    def test_sequence_shorthands(self):
        X = catalog_model("P1")
        assert len(resolve_sequence(X, "trivial@3").steps) == 3
        dnc = resolve_sequence(X, "dnc@0")
        assert len(dnc.steps) == 2
        with pytest.raises(ConfigError, match="shorthand"):
            resolve_sequence(X, "trivial@0")


class TestCatalogAndVolume:
    def test_catalog_lists_all_models(self, run):
        code, out, _ = run("catalog")
        assert code == 0
        names = [line.split()[0] for line in out.splitlines()]
        assert names == ["P1", "P112", "P1xP1", "P1xP2", "P2", "P3", "dP6"]

    def test_catalog_json(self, run):
        code, out, _ = run("catalog", "--json")
        assert code == 0
        data = json.loads(out)
        assert data["P2"]["rays"] == [[1, 0], [0, 1], [-1, -1]]
        assert data["dP6"]["r0"] == 1

    def test_volume_plain(self, run):
        code, out, _ = run("volume", "--model", "P1xP2")
        assert code == 0
        assert "anticanonical volume: 54 (54.000000000000)" in out

    def test_volume_with_profile_csv(self, run, tmp_path):
        csv_path = tmp_path / "profile.csv"
        code, out, _ = run("volume", "--model", "P2", "--subscheme", "point@0",
                           "--profile-csv", str(csv_path))
        assert code == 0
        assert "tau = 3 (3.000000000000)" in out
        assert "integral = 18 (18.000000000000)" in out
        assert csv_path.read_text() == "start,end,c0,c1,c2\n0,3,9,0,-1\n"

    def test_profile_csv_requires_subscheme(self, run, tmp_path):
        code, _, err = run("volume", "--model", "P2",
                           "--profile-csv", str(tmp_path / "x.csv"))
        assert code == 1
        assert "--profile-csv needs --subscheme" in err


class TestLct:
    def test_point_threshold_and_powers(self, run):
        code, out, _ = run("lct", "--model", "P2", "--subscheme", "point@0")
        assert (code, out) == (0, "lct = 2 (2.000000000000)\n")
        code, out, _ = run("lct", "--model", "P2", "--subscheme", "point@0",
                           "--power", "2")
        assert (code, out) == (0, "lct = 1 (1.000000000000)\n")

    def test_product_line_threshold(self, run):
        code, out, _ = run("lct", "--model", "P1", "--subscheme", "dnc@0",
                           "--product-line", "--c1", "1/2")
        assert code == 0
        assert "product-line threshold:" in out

    def test_product_line_requires_c1(self, run):
        code, _, err = run("lct", "--model", "P1", "--subscheme", "dnc@0",
                           "--product-line")
        assert code == 1
        assert "--product-line needs --c1" in err


class TestFiltration:
    def test_point_on_line_report(self, run, tmp_path):
        report_path = tmp_path / "d.json"
        code, out, _ = run("filtration", "--model", "P1", "--subscheme",
                           "point@0", "--report", str(report_path))
        assert code == 0
        assert "r1 = 1; window (-1, 3)" in out
        assert "d_infty = -1 (-1.000000000000)" in out
        data = json.loads(report_path.read_text())
        assert data["model"] == "P1"
        assert data["subscheme"] == "point@0"
        assert data["d_infty"]["d_infty"]["fraction"] == "-1"


class TestBetaAndDing:
    def test_consistent_point(self, run):
        code, out, _ = run("beta", "--model", "P2", "--subscheme", "point@0")
        assert code == 0
        assert "beta(point@0) = 0 (0.000000000000): CONSISTENT" in out

    def test_obstructing_divisor_exits_two(self, run, tmp_path):
        out_path = tmp_path / "beta.json"
        code, out, _ = run("beta", "--model", "P112", "--subscheme",
                           "divisor@1,0", "--out", str(out_path))
        assert code == 2
        assert "-8/3 (-2.666666666667): OBSTRUCTS_SEMISTABILITY" in out
        data = json.loads(out_path.read_text())
        assert data["beta"]["fraction"] == "-8/3"

    def test_ding_trivial_sequence_is_zero(self, run):
        code, out, _ = run("ding", "--model", "P1", "--sequence", "trivial@2")
        assert code == 0
        assert "M = 2, L_top = 0 (0.000000000000)" in out
        assert "ding = 0 (0.000000000000)" in out

    def test_ding_dnc_value(self, run):
        code, out, _ = run("ding", "--model", "P1", "--sequence", "dnc@0",
                           "--r", "1")
        assert code == 0
        assert "L_top = -2 (-2.000000000000)" in out
        assert "ding = 1/2 (0.500000000000)" in out


class TestVerifyBoundAndScan:
    def test_bound_holds_with_seshadri_lines(self, run):
        code, out, _ = run("verify-bound", "--model", "P2")
        assert code == 0
        assert "volume 9 (9.000000000000) within bound 9" in out
        assert out.count("seshadri at chart") == 3
        assert "3 (3.000000000000)" in out

    def test_bound_violated_exits_two(self, run, p116_path):
        code, out, _ = run("verify-bound", "--model", p116_path)
        assert code == 2
        assert "volume 32/3 (10.666666666667) EXCEEDS bound 9" in out

    def test_scan_clean_battery(self, run):
        code, out, _ = run("scan", "--model", "P2")
        assert code == 0
        assert out.count("CONSISTENT") == 9
        assert "OBSTRUCTS" not in out

    def test_scan_obstructed_exits_two(self, run, tmp_path):
        out_path = tmp_path / "scan.json"
        code, out, _ = run("scan", "--model", "P112", "--out", str(out_path))
        assert code == 2
        assert out.count("OBSTRUCTS_SEMISTABILITY") == 2
        data = json.loads(out_path.read_text())
        assert len(data["entries"]) == 7

    def test_scan_explicit_candidates(self, run):
        code, out, _ = run("scan", "--model", "P2", "--subscheme", "point@0",
                           "--subscheme", "point2@1")
        assert code == 0
        assert [line.split(":")[0] for line in out.splitlines()] == [
            "point@0", "point2@1"]


class TestAcceptanceCommand:
    def test_short_budget_fails_stabilization(self, run, tmp_path):
        config_path = tmp_path / "c.json"
        config_path.write_text('{"k_max": 2}')
        out_path = tmp_path / "summary.json"
        code, out, _ = run("test-acceptance", "--config", str(config_path),
                           "--out", str(out_path))
        assert code == 1
        lines = out.splitlines()
        assert "FAIL 7 weight-identity-limit: NoStabilization" in out
        assert "FAIL 8 ding-values: NoStabilization" in out
        assert sum(line.startswith("PASS") for line in lines) == 7
        assert lines[-3].endswith("s]")
        assert lines[-2] == "FAILURES above"
        assert lines[-1].startswith("report written to")
        data = json.loads(out_path.read_text())
        assert data["passed"] is False
        assert len(data["criteria"]) == 9

    def test_missing_model_is_config_error(self, run, tmp_path):
        config_path = tmp_path / "c.json"
        config_path.write_text('{"model": "/nonexistent/model.json"}')
        code, out, err = run("test-acceptance", "--config", str(config_path))
        assert code == 1
        assert out == ""
        assert "neither a catalog name" in err


class TestErrorPaths:
    def test_no_command_prints_help(self, run):
        code, out, _ = run()
        assert code == 1
        assert "COMMAND" in out

    def test_help_exits_zero(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["--help"])
        assert exc.value.code == 0
        assert "test-acceptance" in capsys.readouterr().out

    def test_unknown_model_name(self, run):
        code, _, err = run("volume", "--model", "Q7")
        assert code == 1
        assert "neither a catalog name" in err

    def test_domain_error_maps_to_one(self, run):
        code, _, err = run("lct", "--model", "P112", "--subscheme",
                           "point@1")
        assert code == 1
        assert "error: NotSmoothPoint" in err
