import json

import pytest
from click.testing import CliRunner

from stein_algebra.src.catalog.atoms import atom
from stein_algebra.src.cli.commands import MomentsCommand, OperatorCommand, parse_identity, run
from stein_algebra.src.cli.main import cli, main
from stein_algebra.src.exceptions import InvalidParameter


@pytest.fixture
def runner():
    return CliRunner()


def test_operator_command(runner):
    result = runner.invoke(cli, ["operator", "Normal(0,1)*Normal(0,1)"])
    assert result.exit_code == 0
    assert "operator: T_1^2 - M^2" in result.stdout
    assert "expanded: M^2D^2 + 3MD - M^2 + I" in result.stdout


def test_operator_command_explains_its_construction(runner):
    result = runner.invoke(cli, ["operator", "--explain", "Gamma(5,1)*Beta(2,3)", "--reduce"])
    assert result.exit_code == 0
    assert "operator: T_2 - M" in result.stdout
    assert "product(" in result.stdout
    assert "reduce(" in result.stdout


def test_operator_json_report(runner):
    result = runner.invoke(cli, ["operator", "--json", "Gamma(2,1)*Gamma(3,1)"])
    assert result.exit_code == 0
    payload = json.loads(result.stdout)
    assert set(payload) >= {"expression", "operator", "assumption_one"}
    assert payload["assumption_one"]["rendered"] == "T_2T_3 - M"


def test_verify_command(runner):
    result = runner.invoke(cli, ["verify", "Gamma(2,1)*Gamma(3,1)", "--kmax", "5"])
    assert result.exit_code == 0
    assert "all residuals vanish" in result.stdout

    payload = json.loads(runner.invoke(cli, ["verify", "--json", "StudentT(5)", "--kmax", "4"]).stdout)
    assert payload["passed"] is True
    assert [row["status"] for row in payload["residuals"]][-2:] == ["unavailable", "unavailable"]


def test_density_ode_command(runner):
    result = runner.invoke(cli, ["density-ode", "StudentT(5)"])
    assert result.exit_code == 0
    assert "density ODE: 5T_0 + x^2T_6 applied to p = 0" in result.stdout


def test_g_density_for_variance_gamma_products(runner):
    result = runner.invoke(cli, ["g-density", "VGSym(2,1)*VGSym(3,2)"])
    assert result.exit_code == 0
    assert "verdict: StructurallyEqual" in result.stdout

    payload = json.loads(runner.invoke(cli, ["g-density", "--json", "VGSym(2,1)"]).stdout)
    assert payload["gparams"]["m"] == 2
    assert payload["support"] == "symmetric"
    assert payload["verdict"] == "StructurallyEqual"


def test_g_density_with_identities(runner):
    result = runner.invoke(cli, ["g-density", "StudentT(5)", "--identity", "shift:1/2", "--identity", "invert",
                                 "--json"])
    assert result.exit_code == 0
    payload = json.loads(result.stdout)
    assert payload["gparams"]["arg"] == {"prefactor": "5", "power": "-2"}
    assert payload["gparams"]["outer_exponent"] == "1/2"
    assert payload["verdict"] == "StructurallyEqual"


def test_mellin_command(runner):
    result = runner.invoke(cli, ["--probes", "1,2", "mellin", "Exponential(1)"])
    assert result.exit_code == 0
    assert "E|X|^(s-1) = Γ(s)" in result.stdout
    assert "s = 2: 1.0" in result.stdout


def test_minimal_search_command(runner):
    result = runner.invoke(cli, ["minimal-search", "Normal(1,1)*Normal(1,1)", "--order", "2", "--degree", "1",
                                 "--rows", "6"])
    assert result.exit_code == 0
    assert "determinant: 276480" in result.stdout
    assert "no nonzero operator of this shape" in result.stdout


def test_moments_command_derives_from_seeds(runner):
    result = runner.invoke(cli, ["moments", "Normal(1,1)*Normal(2,1)", "--kmax", "4", "--seeds", "1,2,10"])
    assert result.exit_code == 0
    assert "mu_2 = 10" in result.stdout
    assert "derived mu_3 = 56" in result.stdout
    assert "derived mu_4 = 430" in result.stdout


def test_moments_with_wrong_seeds_fail_verification():
    report = run(MomentsCommand(atom("Gamma", 2, 1), 3, ("1", "3")))
    assert report.exit_code == 2
    assert report.payload["mismatches"] == [2, 3]


def test_unknown_distribution_suggests_a_name(capsys):
    assert main(["operator", "Gama(1,1)"]) == 1
    assert "did you mean Gamma?" in capsys.readouterr().err


def test_unsupported_expression_names_the_blocking_part(capsys):
    assert main(["operator", "VG(2,1,1)*Gamma(2,1)"]) == 1
    assert "blocking subexpression: VG(2,1,1)" in capsys.readouterr().err


def test_bad_settings_file_is_a_usage_error(tmp_path, capsys):
    path = tmp_path / "settings.yaml"
    path.write_text("precision_digits: 5\n", encoding="utf8")
    assert main(["--config", str(path), "operator", "Gamma(1,1)"]) == 1
    assert "error:" in capsys.readouterr().err


def test_main_returns_zero_on_success():
    assert main(["operator", "Exponential(1)"]) == 0


def test_run_returns_reports():
    report = run(OperatorCommand(atom("Gamma", 2, 1)))
    assert report.exit_code == 0
    assert report.payload["operator"]["rendered"] == "MD - M + 2"


def test_parse_identity():
    assert parse_identity("shift:1/2") == ("shift", "1/2")
    assert parse_identity("invert") == ("invert", None)
    with pytest.raises(InvalidParameter):
        parse_identity("shift")
