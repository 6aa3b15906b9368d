import pytest
from click.testing import CliRunner

from app.main import EXIT_CONFIG, EXIT_OK, EXIT_RUNTIME, cli, main


@pytest.fixture
def runner():
    return CliRunner()


class TestSubcommands:
    def test_time_dilation_table(self, runner, golden):
        result = runner.invoke(cli, ["time-dilation", "--beta", "0.5", "--ticks", "7"])
        assert result.exit_code == 0
        assert result.stdout == golden("table1.csv")

    def test_constant_force_table(self, runner, golden):
        result = runner.invoke(cli, ["constant-force", "--ti", "1", "--mu", "1", "--tau-r", "10", "--ticks", "8"])
        assert result.exit_code == 0
        assert result.stdout == golden("table2.csv")

    def test_sync_table(self, runner):
        result = runner.invoke(cli, ["sync-table", "--sigma-max", "100", "--rho-max", "50"])
        assert result.exit_code == 0
        lines = result.stdout.splitlines()
        assert lines[0] == "sigma,rho,marked"
        assert len(lines) == 1 + 101 * 51
        assert "10,5,12" in lines

    def test_trace(self, runner, golden):
        result = runner.invoke(cli, ["trace", "--beta", "0.5", "--ticks", "1"])
        assert result.exit_code == 0
        assert result.stdout == golden("trace_beta05_tick1.csv")

    def test_convergence(self, runner):
        result = runner.invoke(cli, ["convergence"])
        assert result.exit_code == 0
        assert result.stdout.splitlines() == ["tau_R,max_err%,bound%", "10,7.33,8.94", "20,2.86,4.47", "40,0.62,2.24"]

    def test_output_files(self, runner, tmp_path):
        csv, worldline, report = tmp_path / "t1.csv", tmp_path / "wl.txt", tmp_path / "t1.md"
        result = runner.invoke(
            cli,
            ["time-dilation", "--beta", "0.5", "--csv", str(csv), "--worldline", str(worldline), "--report", str(report)],
        )
        assert result.exit_code == 0
        assert result.stdout == ""
        assert csv.read_text().startswith("Tw,x,t,ta,err%,tp\n")
        assert worldline.read_text().splitlines()[0] == "0.5 1.2"
        assert "## Error Summary" in report.read_text()

    def test_curve_and_pdf(self, runner, tmp_path):
        curve, report = tmp_path / "vp.txt", tmp_path / "force.pdf"
        result = runner.invoke(
            cli, ["constant-force", "--ti", "1", "--curve", str(curve), "--report", str(report)]
        )
        assert result.exit_code == 0
        assert curve.read_text().splitlines()[4].split()[0] == "0.42"
        assert report.read_bytes().startswith(b"%PDF")

    def test_deterministic(self, runner):
        args = ["trace", "--beta", "0.5", "--ticks", "3", "--verbosity", "nodes"]
        assert runner.invoke(cli, args).stdout == runner.invoke(cli, args).stdout


class TestMain:
    def test_success(self, capsys, golden):
        assert main(["time-dilation", "--beta", "0.5", "--ticks", "7"]) == EXIT_OK
        assert capsys.readouterr().out == golden("table1.csv")

    def test_beta_above_one_is_config_error(self, tmp_path):
        csv = tmp_path / "out.csv"
        assert main(["time-dilation", "--beta", "1.5", "--csv", str(csv)]) == EXIT_CONFIG
        assert not csv.exists()

    def test_beta_above_one_with_override(self, capsys):
        assert main(["time-dilation", "--beta", "1.5", "--ticks", "2", "--allow-beta-above-one"]) == EXIT_OK
        assert capsys.readouterr().out.startswith("Tw,x,t,ta,err%,tp\n")

    def test_fractional_momentum_is_config_error(self):
        assert main(["time-dilation", "--beta", "0.25"]) == EXIT_CONFIG

    def test_usage_error(self):
        assert main(["no-such-command"]) == EXIT_CONFIG
        assert main(["constant-force"]) == EXIT_CONFIG

    def test_runtime_error_writes_nothing(self, tmp_path):
        csv = tmp_path / "force.csv"
        code = main(["constant-force", "--ti", "1", "--ticks", "8", "--cells", "3", "--csv", str(csv)])
        assert code == EXIT_RUNTIME
        assert not csv.exists()

    def test_run_config_file(self, tmp_path):
        csv = tmp_path / "table.csv"
        config = tmp_path / "run.cfg"
        config.write_text(f"experiment=constant-force\nti=1\ncsv={csv}\n", encoding="utf-8")
        assert main(["run", str(config)]) == EXIT_OK
        assert csv.read_text().splitlines()[-1] == "8,0.88,0.67,0.66,0.91,1.36,1.33,2.1"

    def test_run_bad_config_file(self, tmp_path):
        config = tmp_path / "run.cfg"
        config.write_text("experiment=constant-force\n", encoding="utf-8")
        assert main(["run", str(config)]) == EXIT_CONFIG
