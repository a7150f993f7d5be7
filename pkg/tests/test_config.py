"""
Tests for the configuration module.
"""

from uirisk.config import (
    ConvergenceSettings,
    InvestSettings,
    LoggingSettings,
    NumericsSettings,
    PathSettings,
    RuntimeSettings,
    SearchSettings,
    Settings,
    UISettings,
)


class TestNumericsSettings:
    """Tests for numeric tolerances."""

    def test_defaults(self):
        """Should default every tolerance to 1e-12 and the concavity grid to 2048."""
        s = NumericsSettings()
        assert s.atom_tol == 1e-12
        assert s.weight_tol == 1e-12
        assert s.concavity_grid == 2048

    def test_env_override(self, monkeypatch):
        """Should read tolerances from the environment."""
        monkeypatch.setenv("UIRISK_NUMERICS_ATOM_TOL", "1e-9")
        assert NumericsSettings().atom_tol == 1e-9


class TestUISettings:
    """Tests for diagnostic thresholds."""

    def test_defaults(self):
        """Should default to 20 levels and horizon 10^4."""
        s = UISettings()
        assert s.grid_levels == 20
        assert s.horizon == 10_000
        assert s.divergence_threshold == 1e6
        assert s.growth_ratio == 0.9

    def test_env_override(self, monkeypatch):
        """Should read the horizon from the environment."""
        monkeypatch.setenv("UIRISK_UI_HORIZON", "500")
        assert UISettings().horizon == 500


class TestSearchSettings:
    """Tests for the folding search."""

    def test_defaults(self):
        """Should search four atoms for 10^5 iterations."""
        s = SearchSettings()
        assert s.atoms == 4
        assert s.iterations == 100_000


class TestConvergenceSettings:
    """Tests for convergence experiment defaults."""

    def test_default_levels(self):
        """Should default to exceedance levels 0.1 and 0.05."""
        assert ConvergenceSettings().exceedance_levels == [0.1, 0.05]

    def test_comma_separated_levels(self, monkeypatch):
        """Exceedance levels may be given as a comma list."""
        monkeypatch.setenv("UIRISK_CONV_EXCEEDANCE_LEVELS", "0.2,0.01")
        assert ConvergenceSettings().exceedance_levels == [0.2, 0.01]


class TestInvestSettings:
    """Tests for the investment solver."""

    def test_defaults(self):
        """Should default to 50 cells and 8 starts."""
        s = InvestSettings()
        assert s.grid_size == 50
        assert s.starts == 8
        assert s.feasibility_tol == 1e-9


class TestRuntimeSettings:
    """Tests for runtime knobs."""

    def test_defaults(self):
        """Should default to one worker and seed 7."""
        s = RuntimeSettings()
        assert s.threads == 1
        assert s.seed == 7

    def test_seed_from_env(self, monkeypatch):
        """Should read the master seed from UIRISK_SEED."""
        monkeypatch.setenv("UIRISK_SEED", "123")
        assert RuntimeSettings().seed == 123

    def test_threads_clamped(self, monkeypatch):
        """Non-positive thread counts fall back to one worker."""
        monkeypatch.setenv("UIRISK_THREADS", "0")
        assert RuntimeSettings().threads == 1


class TestPathSettings:
    """Report root handling."""

    def test_ensure_dirs(self, tmp_path):
        """Should create the report root and return it."""
        s = PathSettings(output_dir=str(tmp_path / "out"))
        assert s.ensure_dirs() == tmp_path / "out"
        assert (tmp_path / "out").is_dir()


class TestLoggingSettings:
    """Tests for log settings."""

    def test_defaults(self):
        """Should log at INFO to uirisk.log."""
        s = LoggingSettings()
        assert s.level == "INFO"
        assert s.file.endswith("uirisk.log")


class TestSettings:
    """Tests for the aggregate settings object."""

    def test_sub_settings_present(self):
        """Should aggregate one object per concern."""
        s = Settings()
        assert isinstance(s.ui, UISettings)
        assert isinstance(s.invest, InvestSettings)
        assert isinstance(s.runtime, RuntimeSettings)

    def test_setup_creates_directories(self, tmp_path):
        """Should create the report root and the log directory."""
        s = Settings(
            paths=PathSettings(output_dir=str(tmp_path / "reports")),
            logging=LoggingSettings(file=str(tmp_path / "logs" / "run.log")),
        )
        s.setup()
        assert (tmp_path / "reports").is_dir()
        assert (tmp_path / "logs").is_dir()

    def test_setup_without_reports(self, tmp_path):
        """Should leave the report root alone when nothing is written."""
        s = Settings(
            paths=PathSettings(output_dir=str(tmp_path / "reports")),
            logging=LoggingSettings(file=str(tmp_path / "logs" / "run.log")),
        )
        s.setup(reports=False)
        assert not (tmp_path / "reports").exists()
        assert (tmp_path / "logs").is_dir()
