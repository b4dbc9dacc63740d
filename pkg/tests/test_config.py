import pytest

from vlasovwave.config import Config, parse_config, render_config
from vlasovwave.errors import ConfigError

MINIMAL = """
mode = evolve

[grid]
x_min = -6
x_max = 6
v_min = -4
v_max = 4
nx = 64
nv = 64
t_final = 2
"""


def test_minimal_config_fills_defaults():
    cfg = parse_config(MINIMAL)
    assert cfg.mode == "evolve"
    assert cfg.grid.nx == 64 and cfg.grid.t_final == 2.0
    assert cfg.initial_data.f0 == "bump2d"
    assert cfg.initial_data.f0_v_center == 0.5
    assert cfg.transport.mode == "analytic"
    assert cfg.transport.coupling is True
    assert cfg.output.snapshot_cadence == 10
    assert cfg.tolerances.eps_supp == 1e-12
    assert cfg.picard.t_horizon == 0.25


def test_round_trip():
    cfg = parse_config(MINIMAL)
    assert parse_config(render_config(cfg)) == cfg
    cfg.transport.mode = "depth_one"
    cfg.output.directory = "elsewhere"
    cfg.picard.t_horizon = 0.5
    assert parse_config(render_config(cfg)) == cfg


def test_duplicate_key_names_both_lines():
    text = MINIMAL + "nx = 32\n"
    with pytest.raises(ConfigError) as err:
        parse_config(text)
    msg = str(err.value)
    assert "duplicate key" in msg and "nx" in msg
    assert "first set on line" in msg


def test_unknown_key_rejected():
    with pytest.raises(ConfigError) as err:
        parse_config(MINIMAL + "nz = 3\n")
    assert "unknown key" in str(err.value)


def test_unknown_section_rejected():
    with pytest.raises(ConfigError):
        parse_config(MINIMAL + "[physics]\ngravity = 9.8\n")


def test_negative_nx_message():
    bad = MINIMAL.replace("nx = 64", "nx = -3")
    with pytest.raises(ConfigError) as err:
        parse_config(bad)
    assert "nx must be >= 2" in str(err.value)


def test_type_mismatch():
    bad = MINIMAL.replace("nx = 64", "nx = many")
    with pytest.raises(ConfigError) as err:
        parse_config(bad)
    assert "type int" in str(err.value)


def test_missing_required_key():
    bad = MINIMAL.replace("t_final = 2\n", "")
    with pytest.raises(ConfigError) as err:
        parse_config(bad)
    assert "t_final" in str(err.value)


def test_bad_mode():
    with pytest.raises(ConfigError):
        parse_config("mode = simulate\n" + MINIMAL.replace("mode = evolve", ""))


def test_top_level_key_restriction():
    with pytest.raises(ConfigError):
        parse_config("nx = 4\n")


def test_malformed_lines_have_numbers():
    with pytest.raises(ConfigError) as err:
        parse_config("mode = evolve\nwhat is this\n")
    assert "line 2" in str(err.value)


def test_build_grid_and_initial_data():
    cfg = parse_config(MINIMAL)
    grid = cfg.build_grid()
    assert grid.nx == 64
    assert grid.dt == grid.dx
    init = cfg.build_initial_data()
    assert init.f0_sup == 1.0
    assert init.a0.is_zero and init.a1.is_zero


def test_transport_validation():
    bad = MINIMAL + "\n[transport]\nmode = spectral\n"
    with pytest.raises(ConfigError):
        parse_config(bad)


def test_comments_and_blanks_ignored():
    text = "# leading comment\n; alt comment\n" + MINIMAL
    assert parse_config(text) == parse_config(MINIMAL)
