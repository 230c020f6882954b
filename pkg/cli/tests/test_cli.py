"""
Unit tests for the billiards CLI.
"""

import json
from pathlib import Path
from unittest.mock import patch

import numpy as np
import pytest
import yaml
from pydantic import ValidationError

from cli.billiards import (
    EXIT_INVARIANT,
    EXIT_NUMERIC,
    EXIT_OK,
    EXIT_USAGE,
    exit_code_for,
    main,
    setup_global_parser,
    setup_subparsers,
)
from cli.commands.selftest import engine_summary
from cli.config import CACHE_ENV, CONFIG_ENV, RunConfig, load_config
from cli.output import OutputWriter, input_hash, shape_tag
from core.exceptions import (
    BilliardError,
    ConfigError,
    ConvergenceError,
    DomainError,
    FamilyNotFoundError,
    InsufficientLevelsError,
    InvariantFailure,
)
from core.models import StatCurve, StatisticKind, ellipse_from_sigma, rectangle
from engines import EngineManager

REPO = Path(__file__).resolve().parents[2]
DEFAULT_CONFIG = str(REPO / "configs" / "default.yaml")
ENGINES_CONFIG = str(REPO / "configs" / "engines.yml")


@pytest.fixture
def run(tmp_path):
    """main() against the repository configs with outputs under tmp_path."""

    def invoke(*argv, output="out"):
        return main(
            [
                "--config",
                DEFAULT_CONFIG,
                "--engines-config",
                ENGINES_CONFIG,
                "--cache-dir",
                str(tmp_path / "cache"),
                "-o",
                str(tmp_path / output),
                *argv,
            ]
        )

    return invoke


def read_rows(path):
    lines = [line for line in Path(path).read_text().splitlines() if not line.startswith("#")]
    return lines[0].split(","), [line.split(",") for line in lines[1:]]


class TestGlobalParser:
    """Tests for the argument parser."""

    def test_parser_creation(self):
        parser = setup_global_parser()

        assert parser.prog == "billiards"

    def test_version_flag(self):
        parser = setup_global_parser()

        with pytest.raises(SystemExit) as exc_info:
            parser.parse_args(["--version"])
        assert exc_info.value.code == 0

    def test_commands_registered(self):
        parser = setup_global_parser()
        setup_subparsers(parser)

        for command in ["spectrum", "orbits", "stats", "fourier", "selftest"]:
            args = parser.parse_args([command])
            assert args.command == command
            assert callable(args.func)

    def test_global_options(self):
        parser = setup_global_parser()
        setup_subparsers(parser)

        args = parser.parse_args(["--seed", "4", "-o", "results", "spectrum", "--levels", "10"])

        assert args.seed == 4
        assert args.output_dir == "results"
        assert args.levels == 10


class TestMain:
    """Tests for main() and its exit codes."""

    def test_version(self):
        assert main(["--version"]) == EXIT_OK

    def test_no_command_prints_help(self, capsys):
        assert main([]) == EXIT_OK
        assert "billiards" in capsys.readouterr().out

    def test_bad_flag(self):
        assert main(["spectrum", "--billiard", "stadium"]) == EXIT_USAGE
        assert main(["nonsense"]) == EXIT_USAGE

    def test_exit_code_mapping(self):
        assert exit_code_for(ConfigError("x")) == EXIT_USAGE
        assert exit_code_for(DomainError("x")) == EXIT_USAGE
        assert exit_code_for(ConvergenceError("x")) == EXIT_NUMERIC
        assert exit_code_for(InsufficientLevelsError("x")) == EXIT_NUMERIC
        assert exit_code_for(FamilyNotFoundError("x")) == EXIT_NUMERIC
        assert exit_code_for(BilliardError("x")) == EXIT_NUMERIC
        assert exit_code_for(InvariantFailure("x")) == EXIT_INVARIANT

    def test_validation_error_is_usage(self):
        with pytest.raises(ValidationError) as exc_info:
            RunConfig.model_validate({"billiard": {"sigma": 1.5}})

        assert exit_code_for(exc_info.value) == EXIT_USAGE

    def test_invalid_sigma_flag(self, run):
        assert run("spectrum", "--sigma", "1.5") == EXIT_USAGE

    def test_missing_config_file(self, tmp_path):
        assert main(["--config", str(tmp_path / "absent.yaml"), "spectrum"]) == EXIT_USAGE


class TestConfig:
    """Tests for load_config and the RunConfig sections."""

    def test_repository_defaults(self):
        config = load_config(DEFAULT_CONFIG)

        assert config.billiard.kind == "ellipse"
        assert config.billiard.sigma == 0.5
        assert config.fourier.levels == 800
        assert config.statistics.epsilon_range == (0.2, 0.9)

    def test_env_config_path(self, tmp_path):
        path = tmp_path / "run.yaml"
        path.write_text(yaml.safe_dump({"seed": 11, "billiard": {"kind": "circle"}}))

        with patch.dict("os.environ", {CONFIG_ENV: str(path)}):
            config = load_config()

        assert config.seed == 11
        assert config.billiard.shape().is_circle

    def test_env_cache_dir(self, tmp_path):
        with patch.dict("os.environ", {CACHE_ENV: str(tmp_path)}):
            config = load_config(DEFAULT_CONFIG)

        assert config.cache_dir == str(tmp_path)

    def test_missing_explicit_path(self, tmp_path):
        with pytest.raises(ConfigError):
            load_config(str(tmp_path / "absent.yaml"))

    def test_unparsable_file(self, tmp_path):
        path = tmp_path / "broken.yaml"
        path.write_text("billiard: [unclosed\n")

        with pytest.raises(ConfigError):
            load_config(str(path))

    def test_overrides_skip_none(self):
        config = load_config(DEFAULT_CONFIG, {"seed": None, "billiard": {"levels": 12, "sigma": None}})

        assert config.seed == 0
        assert config.billiard.levels == 12
        assert config.billiard.sigma == 0.5

    def test_unknown_key_rejected(self):
        with pytest.raises(ValidationError):
            RunConfig.model_validate({"billiard": {"radius": 2.0}})

    def test_section_validators(self):
        with pytest.raises(ValidationError):
            RunConfig.model_validate({"billiard": {"sides": [1.0, -1.0]}})
        with pytest.raises(ValidationError):
            RunConfig.model_validate({"fourier": {"k_min": 10.0, "k_max": 5.0}})
        with pytest.raises(ValidationError):
            RunConfig.model_validate({"statistics": {"epsilon_range": [0.8, 0.2]}})

    def test_symmetry_classes(self):
        config = RunConfig.model_validate({"billiard": {"classes": ["odd-odd", "even-even"]}})

        assert [c.label for c in config.billiard.symmetry_classes()] == ["odd-odd", "even-even"]
        merged = RunConfig.model_validate({"billiard": {"merged": True}})
        assert len(merged.billiard.symmetry_classes()) == 4

    def test_fourier_window_falls_back(self):
        config = RunConfig.model_validate({"fourier": {"k_min": 5.0}})

        assert config.fourier.window(1.0, 50.0) == (5.0, 50.0)

    def test_config_hash_tracks_content(self):
        assert RunConfig().config_hash == RunConfig().config_hash
        assert RunConfig().config_hash != RunConfig(seed=1).config_hash

    def test_provenance_leaves_out_locations(self):
        first = RunConfig(output_dir="a", cache_dir="x")
        second = RunConfig(output_dir="b")

        assert "output_dir" not in first.provenance()
        assert first.config_hash == second.config_hash


class TestOutput:
    """Tests for OutputWriter and its helpers."""

    @pytest.fixture
    def writer(self, tmp_path):
        return OutputWriter(RunConfig(), "test", tmp_path)

    def test_csv_header(self, writer, tmp_path):
        path = writer.csv("table.csv", ["a", "b"], [(1, 2.5), (2, 3.5)], "abc")

        text = path.read_text()
        assert text.startswith("# billiards 1.0.0 test")
        assert "# input_hash: abc" in text
        assert read_rows(path) == (["a", "b"], [["1", "2.5"], ["2", "3.5"]])
        assert writer.written == [path]

    def test_curve(self, writer):
        curve = StatCurve(StatisticKind.NUMBER_VARIANCE, [1.0, 2.0], [0.5, 0.7], [0.0, 0.1], 3)

        columns, rows = read_rows(writer.curve("sigma.csv", curve))

        assert columns == ["x", "value", "stderr", "n_samples"]
        assert len(rows) == 2

    def test_json_provenance_first(self, writer):
        path = writer.json("doc.json", {"answer": 42})

        document = json.loads(path.read_text())
        assert list(document)[0] == "provenance"
        assert document["provenance"]["command"] == "test"
        assert document["answer"] == 42

    def test_text(self, writer):
        text = writer.text("report.txt", "body line").read_text()

        assert text.splitlines()[0].startswith("# ")
        assert "body line" in text

    def test_svg_is_deterministic(self, writer):
        x = np.linspace(0.0, 1.0, 20)
        series = [("x^2", x, x ** 2, None), ("x", x, x, 0.1 * np.ones(20))]

        first = writer.svg("plot.svg", series, "x", "y", "title").read_bytes()
        second = writer.svg("plot.svg", series, "x", "y", "title").read_bytes()

        assert first == second
        assert b"config_hash" in first

    def test_shape_tag(self):
        assert shape_tag(rectangle(1.0, 2.0)) == "rectangle_1x2"
        assert shape_tag(ellipse_from_sigma(1.0)) == "circle"
        assert shape_tag(ellipse_from_sigma(0.5)) == "ellipse_s0.5"

    def test_input_hash(self):
        assert input_hash(levels=np.array([1.0, 2.0])) == input_hash(levels=[1.0, 2.0])
        assert input_hash(levels=[1.0, 2.0]) != input_hash(levels=[1.0, 2.5])


class TestCommands:
    """End-to-end runs of the commands on small problems."""

    def test_spectrum_rectangle(self, run, tmp_path):
        argv = ("spectrum", "--billiard", "rectangle", "--sides", "1", "2", "--levels", "50")

        assert run(*argv) == EXIT_OK

        path = tmp_path / "out" / "spectrum_rectangle_1x2_full.csv"
        columns, rows = read_rows(path)
        assert columns == ["index", "energy", "momentum", "converged"]
        assert len(rows) == 50
        assert float(rows[0][1]) == pytest.approx(np.pi ** 2 * 1.25)

    def test_spectrum_is_reproducible(self, run, tmp_path):
        argv = ("spectrum", "--billiard", "circle", "--class", "odd-odd", "--levels", "20")

        assert run(*argv, output="first") == EXIT_OK
        assert run(*argv, output="second") == EXIT_OK

        name = "spectrum_circle_odd-odd.csv"
        assert (tmp_path / "first" / name).read_bytes() == (tmp_path / "second" / name).read_bytes()

    def test_spectrum_partial_is_numeric_failure(self, tmp_path):
        config = yaml.safe_load(Path(DEFAULT_CONFIG).read_text())
        config["engines"] = {"spectrum": {"max_rounds": 1, "convergence_tol": 1e-12}}
        path = tmp_path / "strict.yaml"
        path.write_text(yaml.safe_dump(config))
        argv = ["--config", str(path), "--engines-config", ENGINES_CONFIG, "-o", str(tmp_path / "out")]
        argv += ["--cache-dir", str(tmp_path / "cache")]
        argv += ["spectrum", "--billiard", "ellipse", "--sigma", "0.5", "--class", "odd-odd"]

        assert main(argv + ["--levels", "20"]) == EXIT_NUMERIC

        _, rows = read_rows(tmp_path / "out" / "spectrum_ellipse_s0.5_odd-odd.csv")
        converged = sum(int(row[-1]) for row in rows)
        assert converged < 20
        assert len(rows) > 20

    def test_orbits_rectangle(self, run, tmp_path):
        assert run("orbits", "--billiard", "rectangle", "--sides", "1", "2", "--l-max", "5") == EXIT_OK

        document = json.loads((tmp_path / "out" / "orbits_rectangle_1x2.json").read_text())
        assert document["families"][0]["label"] == "(1,0)"
        assert document["invariants"] is None
        assert (tmp_path / "out" / "orbits_rectangle_1x2_report.txt").exists()

    def test_orbits_ellipse_report(self, run, tmp_path):
        assert run("orbits", "--billiard", "ellipse", "--sigma", "0.5", "--l-max", "7") == EXIT_OK

        document = json.loads((tmp_path / "out" / "orbits_ellipse_s0.5.json").read_text())
        assert document["invariants"]["passed"]
        assert any(f["label"] == "R3,1" for f in document["families"])

    def test_fourier_rectangle(self, run, tmp_path):
        argv = ("fourier", "--billiard", "rectangle", "--levels", "1000", "--l-max", "8")

        assert run(*argv) == EXIT_OK

        out = tmp_path / "out"
        tag = shape_tag(rectangle(1.0, (1 + 5 ** 0.5) / 2))
        for name in [f"length_{tag}.csv", f"peaks_{tag}.csv", f"match_{tag}.csv", f"length_{tag}.svg"]:
            assert (out / name).exists()
        assert "reference: (1,0)" in (out / f"match_{tag}.txt").read_text()

    def test_fourier_svg_is_reproducible(self, run, tmp_path):
        argv = ("fourier", "--billiard", "rectangle", "--sides", "1", "1.5")
        argv += ("--levels", "400", "--l-max", "6")

        assert run(*argv, output="first") == EXIT_OK
        assert run(*argv, output="second") == EXIT_OK

        name = "length_rectangle_1x1.5.svg"
        assert (tmp_path / "first" / name).read_bytes() == (tmp_path / "second" / name).read_bytes()

    def test_fourier_rejects_two_classes(self, run):
        argv = ("fourier", "--billiard", "circle", "--class", "odd-odd", "--class", "even-even")

        assert run(*argv) == EXIT_USAGE

    def test_fourier_too_few_levels(self, run):
        assert run("fourier", "--billiard", "rectangle", "--levels", "50") == EXIT_NUMERIC

    def test_stats_poisson_baseline(self, run, tmp_path):
        config = yaml.safe_load(Path(DEFAULT_CONFIG).read_text())
        config["statistics"]["poisson_samples"] = 20
        path = tmp_path / "poisson.yaml"
        path.write_text(yaml.safe_dump(config))

        code = main(
            [
                "--config",
                str(path),
                "--engines-config",
                ENGINES_CONFIG,
                "-o",
                str(tmp_path / "out"),
                "stats",
                "--poisson",
                "--levels",
                "200",
            ]
        )

        assert code == EXIT_OK
        summary = json.loads((tmp_path / "out" / "stats_poisson.json").read_text())
        assert summary["samples"] == 20
        assert "poisson" in summary
        assert (tmp_path / "out" / "spacing_poisson.svg").exists()

    def test_engine_summary(self):
        manager = EngineManager(config_path=None)
        manager.spectrum.build(rectangle(1.0, 2.0), None, 10)

        lines = engine_summary(manager)

        assert [line.split()[0] for line in lines] == ["spectrum", "orbits", "statistics", "length"]
        assert "runs    1" in lines[0]
        assert "errors   0" in lines[0]

    @pytest.mark.slow
    def test_selftest_is_reproducible(self, run, tmp_path):
        assert run("selftest", "--poisson-samples", "200", output="first") == EXIT_OK
        assert run("selftest", "--poisson-samples", "200", output="second") == EXIT_OK

        _, rows = read_rows(tmp_path / "first" / "selftest.csv")
        assert all(row[-1] == "1" for row in rows)
        names = sorted(p.name for p in (tmp_path / "first").iterdir())
        assert names == sorted(p.name for p in (tmp_path / "second").iterdir())
        for name in names:
            assert (tmp_path / "first" / name).read_bytes() == (tmp_path / "second" / name).read_bytes()
