import json
import math
from pathlib import Path

import numpy as np
import pytest

from qif_mzi import ConfigError
from qif_mzi.cli import build_config, execute, main, parse_config, write_table

REPO = Path(__file__).resolve().parent.parent

FIG2C_TEXT = "mode=distributions\ndelta_over_w=0.3\nphi=2.35619449\nalpha=0\n"


# ---------------------------------------------------------------------------
# config parsing
# ---------------------------------------------------------------------------

def test_parse_minimal_document():
    config = parse_config(FIG2C_TEXT)
    assert config.mode == "distributions"
    assert config.delta_over_w == 0.3
    assert config.phi == pytest.approx(2.35619449)
    assert config.alpha == 0.0
    assert config.r == pytest.approx(math.sqrt(0.5))  # defaulted: balanced
    assert config.format == "csv"


def test_parse_pi_suffix():
    config = parse_config("mode=distributions\ndelta_over_w=0.3\nphi=0.75pi\nalpha=-0.5pi\n")
    assert config.phi == 0.75 * math.pi
    assert config.alpha == -0.5 * math.pi
    bare = parse_config("mode=sweep\ndelta_over_w_min=0\ndelta_over_w_max=3\ndelta_over_w_steps=5\nphi_min=0\nphi_max=pi\nphi_steps=5\n")
    assert bare.phi_max == math.pi


def test_parse_comments_and_spacing():
    text = "# preset\nmode = distributions  # trailing comment\n\ndelta_over_w = 0.3\nphi = 0\nalpha = 0\n"
    assert parse_config(text).mode == "distributions"


def test_empty_document_lists_missing_mode():
    with pytest.raises(ConfigError, match="mode"):
        parse_config("")


def test_unknown_key_fails_closed_with_line():
    with pytest.raises(ConfigError, match="line 2.*unknown key 'bogus'"):
        parse_config("mode=ports\nbogus=1\n")


def test_duplicate_key_rejected():
    with pytest.raises(ConfigError, match="duplicate key"):
        parse_config("mode=ports\nphi=0\nphi=1\n")


def test_malformed_number_reports_line():
    err = None
    try:
        parse_config("mode=distributions\ndelta_over_w=abc\nphi=0\nalpha=0\n")
    except ConfigError as caught:
        err = caught
    assert err is not None and err.line == 2


def test_missing_required_keys_listed():
    with pytest.raises(ConfigError, match="delta_over_w"):
        parse_config("mode=distributions\n")
    with pytest.raises(ConfigError, match="phi_steps"):
        parse_config("mode=sweep\ndelta_over_w_min=0\ndelta_over_w_max=1\ndelta_over_w_steps=5\n")


def test_keys_are_mode_scoped():
    with pytest.raises(ConfigError, match="not valid in mode"):
        parse_config(FIG2C_TEXT + "separation_m=2e-3\n")
    with pytest.raises(ConfigError, match="not valid in mode"):
        parse_config("mode=design\nphi=0\n" )


def test_range_validation():
    with pytest.raises(ConfigError, match="odd"):
        build_config({"mode": "distributions", "delta_over_w": "0.3", "phi": "0", "alpha": "0", "grid_points": "100"})
    with pytest.raises(ConfigError, match="ordered"):
        parse_config("mode=sweep\ndelta_over_w_min=2\ndelta_over_w_max=1\ndelta_over_w_steps=5\nphi_min=0\nphi_max=1\nphi_steps=5\n")
    with pytest.raises(ConfigError, match="at least 2"):
        parse_config("mode=sweep\ndelta_over_w_min=0\ndelta_over_w_max=1\ndelta_over_w_steps=1\nphi_min=0\nphi_max=1\nphi_steps=5\n")
    with pytest.raises(ConfigError, match=r"\[0, 1\]"):
        build_config({"mode": "ports", "delta_over_w": "0.3", "phi": "0", "alpha": "0", "r": "1.5"})
    with pytest.raises(ConfigError, match="unknown mode"):
        build_config({"mode": "plot"})


# ---------------------------------------------------------------------------
# table writer
# ---------------------------------------------------------------------------

def test_csv_shape_and_precision():
    text = write_table(["a", "b"], [(0.3, 1), (2.0, 0)], "csv")
    lines = text.splitlines()
    assert len(lines) == 3
    assert lines[0] == "a,b"
    assert lines[1] == "2.9999999999999999e-01,1"  # 17 significant digits
    assert text.endswith("\n") and "\r" not in text


def test_json_round_trip():
    text = write_table(["name", "x"], [("cc", 0.5)], "json")
    data = json.loads(text)
    assert data == [{"name": "cc", "x": 0.5}]


def test_table_rejects_ragged_rows():
    with pytest.raises(ValueError):
        write_table(["a", "b"], [(1.0,)], "csv")


# ---------------------------------------------------------------------------
# execution modes
# ---------------------------------------------------------------------------

def test_distributions_reports_both_mean_conventions():
    config = build_config(
        {"mode": "distributions", "delta_over_w": "0.3", "phi": "0.75pi", "alpha": "0", "grid_points": "401"}
    )
    result = execute(config)
    assert result.columns == ["p_over_W", "P1_times_W", "P2_times_W"]
    assert len(result.rows) == 401
    text = "\n".join(result.summary)
    assert "+0.356704" in text and "+0.489654" in text and "difference" in text


def test_distributions_port_cc_is_the_kicked_packet():
    config = build_config(
        {"mode": "distributions", "delta_over_w": "0.3", "phi": "0.75pi", "alpha": "0",
         "port": "cc", "grid_points": "401"}
    )
    result = execute(config)
    p = np.array([row[0] for row in result.rows])
    dens1 = np.array([row[1] for row in result.rows])
    peak = p[np.argmax(dens1)]
    assert peak == pytest.approx(-0.3, abs=0.05)


def test_decompose_terms_sum_exactly():
    config = build_config(
        {"mode": "decompose", "delta_over_w": "0.3", "phi": "0.75pi", "alpha": "0", "grid_points": "201"}
    )
    result = execute(config)
    assert result.columns == ["p_over_W", "T_a_times_W", "T_b_times_W", "P1_unnormalized_times_W"]
    for _, t_a, t_b, total in result.rows:
        assert total == t_a + t_b
        assert t_a >= 0.0


def test_sweep_rows_and_dark_convention():
    config = build_config(
        {
            "mode": "sweep",
            "delta_over_w_min": "0",
            "delta_over_w_max": "3",
            "delta_over_w_steps": "5",
            "phi_min": "0",
            "phi_max": "2pi",
            "phi_steps": "5",
            "alpha": "0",
        }
    )
    result = execute(config)
    assert len(result.rows) == 25  # steps arithmetic
    dark = [row for row in result.rows if row[4] <= 1e-12]
    assert len(dark) == 1  # only delta = 0, phi = pi
    assert dark[0][0] == 0.0 and dark[0][1] == pytest.approx(math.pi)
    assert dark[0][2] == 0.0 and dark[0][3] == 0.0
    # row-major emission: delta outer, phi inner
    assert [row[0] for row in result.rows[:5]] == [0.0] * 5


def test_ports_mode_table():
    config = build_config({"mode": "ports", "delta_over_w": "0.3", "phi": "0.75pi", "alpha": "0"})
    result = execute(config)
    assert result.columns == ["port", "probability", "mean_p1_over_W", "mean_p2_over_W", "mean_defined"]
    by_port = {row[0]: row for row in result.rows}
    assert by_port["TOTAL"][1] == pytest.approx(1.0, abs=1e-12)
    assert by_port["TOTAL"][2] == pytest.approx(-0.15, abs=1e-12)
    assert by_port["DC"][2] == pytest.approx(0.35670404722052823, rel=1e-10)
    assert by_port["DC"][2] == -by_port["DC"][3]
    assert all(row[4] == 1 for row in result.rows)


def test_ports_mode_marks_dark_ports_without_nan():
    config = build_config({"mode": "ports", "delta_over_w": "0.3", "phi": "0.9", "alpha": "0", "r": "0"})
    result = execute(config)
    by_port = {row[0]: row for row in result.rows}
    assert by_port["CC"][4] == 0 and by_port["CC"][2] == 0.0
    assert by_port["CD"][4] == 1
    text = write_table(result.columns, result.rows, "csv")
    assert "nan" not in text.lower()


def test_design_mode_row_and_checks():
    config = build_config(
        {
            "mode": "design",
            "separation_m": "2e-3",
            "length_m": "4e-2",
            "speed_m_per_s": "2e6",
            "waist_transverse_m": "1e-5",
            "waist_longitudinal_m": "2e-7",
        }
    )
    result = execute(config)
    row = dict(zip(result.columns, result.rows[0]))
    assert row["delta_over_W"] == pytest.approx(0.2187691264976917, rel=1e-12)
    assert row["alpha_over_pi"] == pytest.approx(-6.963637575600754, rel=1e-12)
    assert row["tuned_multiple_2pi"] == 3
    assert row["tuned_separation_m"] == pytest.approx(2.3212125252002514e-3, rel=1e-12)
    for name in ("separation_to_extent", "potential_to_kinetic", "fringe_to_beam",
                 "linearization_error", "transverse_spread"):
        assert row[f"check_{name}_pass"] == 1


def test_verify_mode_small_battery():
    config = build_config(
        {
            "mode": "verify",
            "draws_marginal": "3",
            "draws_ports": "25",
            "joint_grid_points": "257",
            "seed": "7",
        }
    )
    result = execute(config)
    assert result.exit_code == 0
    assert all(row[3] == 1 for row in result.rows)


# ---------------------------------------------------------------------------
# entry point behaviour
# ---------------------------------------------------------------------------

def test_main_runs_preset_and_writes_deterministic_bytes(tmp_path, capsys):
    out1 = tmp_path / "a.csv"
    out2 = tmp_path / "b.csv"
    base = ["--config", str(REPO / "configs" / "fig2c.cfg"), "--grid-points", "201"]
    assert main(base + ["--out", str(out1)]) == 0
    assert main(base + ["--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()
    assert "wrote 201 row(s)" in capsys.readouterr().out


def test_main_flag_overrides_file(tmp_path):
    config_file = tmp_path / "run.cfg"
    config_file.write_text(FIG2C_TEXT)
    out = tmp_path / "run.json"
    code = main(["--config", str(config_file), "--delta-over-w", "0", "--grid-points", "5",
                 "--format", "json", "--out", str(out)])
    assert code == 0
    rows = json.loads(out.read_text())
    assert len(rows) == 5
    # delta = 0: both electrons keep the symmetric input density
    assert rows[2]["P1_times_W"] == pytest.approx(rows[2]["P2_times_W"], rel=1e-14)


def test_main_positional_mode_overrides_file(tmp_path):
    config_file = tmp_path / "run.cfg"
    config_file.write_text(FIG2C_TEXT)
    code = main(["decompose", "--config", str(config_file), "--grid-points", "11"])
    assert code == 0


def test_main_dark_port_is_structured_error(tmp_path, capsys):
    out = tmp_path / "dark.csv"
    code = main(["distributions", "--delta-over-w", "0", "--phi", "pi", "--alpha", "0", "--out", str(out)])
    assert code == 1
    captured = capsys.readouterr()
    assert "vanishes" in captured.err
    assert "nan" not in captured.err.lower()
    assert not out.exists()


def test_main_config_error_exit_code(capsys):
    assert main(["distributions"]) == 2  # missing required keys
    assert "config error" in capsys.readouterr().err
    assert main(["--config", "/no/such/file.cfg"]) == 2


def test_main_unwritable_output(capsys):
    code = main(["distributions", "--delta-over-w", "0.3", "--phi", "0.75pi", "--alpha", "0",
                 "--grid-points", "11", "--out", "/dev/null/sub/x.csv"])
    assert code == 1
    assert "cannot write" in capsys.readouterr().err


def test_bundled_presets_parse():
    for name in ("fig2a", "fig2b", "fig2c", "fig3", "fig4", "design", "verify"):
        config = parse_config((REPO / "configs" / f"{name}.cfg").read_text())
        assert config.mode in ("distributions", "decompose", "sweep", "design", "verify")
