from typer.testing import CliRunner

from spdelab.cli import cli
from spdelab.core import paths
from spdelab.core.settings import __version__
from spdelab.util import artifact_checksums

runner = CliRunner()


def test_cli():
    assert runner.invoke(cli, "--help").exit_code == 0
    assert runner.invoke(cli, "--settings").exit_code == 0
    res = runner.invoke(cli, "--version")
    assert res.exit_code == 0
    assert __version__ in res.output


def test_cli_certify(experiments_path, tmp_path):
    res = runner.invoke(
        cli, ["certify", "-c", str(experiments_path / "allen_cahn.yml"), "--out", str(tmp_path)]
    )
    assert res.exit_code == 0
    assert (tmp_path / paths.CERTIFICATE).exists()

    res = runner.invoke(
        cli,
        ["certify", "-c", str(experiments_path / "allen_cahn.yml"), "--out", str(tmp_path), "--allow-grid"],
    )
    assert res.exit_code == 0

    res = runner.invoke(
        cli, ["certify", "-c", str(experiments_path / "falsified.yml"), "--out", str(tmp_path)]
    )
    assert res.exit_code == 2


def test_cli_config_errors(experiments_path, tmp_path):
    for name in ("broken.yml", "invalid.yml", "missing.yml"):
        res = runner.invoke(cli, ["certify", "-c", str(experiments_path / name), "--out", str(tmp_path)])
        assert res.exit_code == 1, name
    # picard without cutoff radius
    res = runner.invoke(
        cli, ["picard", "-c", str(experiments_path / "allen_cahn.yml"), "--out", str(tmp_path)]
    )
    assert res.exit_code == 1


def test_cli_simulate(experiments_path, tmp_path):
    config = str(experiments_path / "allen_cahn.yml")
    first, second = tmp_path / "first", tmp_path / "second"
    for out in (first, second):
        res = runner.invoke(cli, ["simulate", "-c", config, "--paths", "6", "--seed", "5", "--out", str(out)])
        assert res.exit_code == 0
    # same config and seed: identical results
    one, two = artifact_checksums(first), artifact_checksums(second)
    assert one[paths.MOMENTS] == two[paths.MOMENTS]
    assert one[paths.REPORTS] == two[paths.REPORTS]

    other = tmp_path / "other"
    res = runner.invoke(cli, ["simulate", "-c", config, "--paths", "6", "--seed", "6", "--out", str(other)])
    assert res.exit_code == 0
    assert artifact_checksums(other)[paths.MOMENTS] != one[paths.MOMENTS]

    res = runner.invoke(cli, ["report", "-c", config, "--out", str(first)])
    assert res.exit_code == 0
    assert "energy_L8" in res.output

    # a check without a verified certificate fails
    failing = tmp_path / "failing"
    res = runner.invoke(
        cli, ["simulate", "-c", str(experiments_path / "falsified.yml"), "--out", str(failing)]
    )
    assert res.exit_code == 3
    res = runner.invoke(cli, ["report", "-c", config, "--out", str(failing)])
    assert res.exit_code == 3


def test_cli_picard_kolmogorov(experiments_path, tmp_path):
    res = runner.invoke(
        cli, ["picard", "-c", str(experiments_path / "picard.yml"), "--out", str(tmp_path)]
    )
    assert res.exit_code == 0
    assert (tmp_path / paths.CONTRACTION).exists()

    res = runner.invoke(
        cli,
        ["kolmogorov", "-c", str(experiments_path / "kolmogorov.yml"), "--paths", "50", "--out", str(tmp_path)],
    )
    assert res.exit_code == 0
    assert (tmp_path / paths.KOLMOGOROV).exists()

    res = runner.invoke(cli, ["report", "--out", str(tmp_path)])
    assert res.exit_code == 0
    assert "picard" in res.output
