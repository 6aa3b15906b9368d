from pathlib import Path

import pytest

from app.components.config_loader import (
    ConfigError,
    RunConfig,
    config_from_options,
    load_config_file,
    parse_config,
)
from app.simulation.engine import Verbosity


class TestParseConfig:
    def test_minimal_time_dilation(self):
        config = parse_config("experiment=time-dilation, beta=0.5")
        assert config.experiment == "time-dilation"
        assert config.beta == 0.5
        assert config.tau_r == 10
        assert (config.v_t, config.v_l, config.v_m, config.c) == (10.0, 10.0, 1.0, 1.0)
        assert config.n_ticks == 7

    def test_multiline_with_comments(self):
        text = """
        # dilation at a tenth of the resolution
        experiment = constant-force   # force run
        ti=2, mu=3
        tau-r=20
        csv=out/table.csv
        """
        config = parse_config(text)
        assert (config.ti, config.mu, config.tau_r) == (2, 3, 20)
        assert config.csv == Path("out/table.csv")
        assert config.n_ticks == 8

    def test_beta_above_one_needs_override(self):
        with pytest.raises(ConfigError) as info:
            parse_config("experiment=time-dilation\nbeta=1.5")
        assert info.value.problems[0][0] == 2
        assert "beta" in info.value.problems[0][1]

    def test_beta_above_one_with_override(self):
        config = parse_config("experiment=time-dilation, beta=1.5, allow_beta_above_one=true")
        assert config.beta == 1.5

    def test_empty_text_lists_missing_keys(self):
        with pytest.raises(ConfigError) as info:
            parse_config("")
        assert "experiment" in str(info.value)

    def test_missing_experiment_keys(self):
        with pytest.raises(ConfigError) as info:
            parse_config("experiment=sync-table, sigma_max=10")
        assert "rho_max" in str(info.value)

    def test_problems_carry_line_numbers(self):
        with pytest.raises(ConfigError) as info:
            parse_config("experiment=trace\nbeta=0.5\ncolour=blue\nticks")
        lines = [line for line, _ in info.value.problems]
        assert lines == [3, 4]

    def test_duplicate_key(self):
        with pytest.raises(ConfigError) as info:
            parse_config("experiment=trace, beta=0.5\nbeta=0.2")
        assert info.value.problems == [(2, "duplicate key 'beta' (first set on line 1)")]

    def test_validation_errors_point_at_key(self):
        with pytest.raises(ConfigError) as info:
            parse_config("experiment=time-dilation\nbeta=0.5\ntau_r=0")
        assert info.value.problems[0][0] == 3

    def test_unknown_experiment(self):
        with pytest.raises(ConfigError) as info:
            parse_config("experiment=twin-paradox")
        assert info.value.problems[0][0] == 1

    def test_units_and_verbosity(self):
        config = parse_config("experiment=trace, beta=0.5, v_t=20, verbosity=cells")
        assert config.units.node_per_cell == 2
        assert config.trace_verbosity is Verbosity.CELLS
        assert config.n_ticks == 1


class TestConfigFromOptions:
    def test_none_means_default(self):
        config = config_from_options(experiment="constant-force", ti=1, ticks=None, cells=None)
        assert config.n_ticks == 8
        assert config.cells is None

    def test_invalid(self):
        with pytest.raises(ConfigError):
            config_from_options(experiment="constant-force", ti=-1)


class TestRunConfig:
    def test_frozen(self):
        config = RunConfig(experiment="trace", beta=0.5)
        with pytest.raises(Exception):
            config.beta = 0.2


class TestLoadConfigFile:
    def test_reads_file(self, tmp_path):
        path = tmp_path / "run.cfg"
        path.write_text("experiment=time-dilation\nbeta=0.5\nticks=3\n", encoding="utf-8")
        assert load_config_file(path).n_ticks == 3

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError):
            load_config_file(tmp_path / "absent.cfg")

    def test_size_guard(self, tmp_path, monkeypatch):
        monkeypatch.setattr("app.components.config_loader.MAX_CONFIG_BYTES", 10)
        path = tmp_path / "run.cfg"
        path.write_text("experiment=time-dilation, beta=0.5", encoding="utf-8")
        with pytest.raises(ConfigError) as info:
            load_config_file(path)
        assert "too large" in str(info.value)
