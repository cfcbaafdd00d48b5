import json

import pytest

from rotlat.config import (
    DEFAULT_SPACING,
    ConfigError,
    RunConfig,
    load_config_file,
    merge_config,
)


def test_defaults_are_valid():
    cfg = RunConfig()
    cfg.validate()
    assert cfg.model == "hubbard"
    assert cfg.nx == cfg.ny == 100
    assert cfg.spacing == pytest.approx(2**-0.5)
    assert cfg.omega == 0.1
    assert DEFAULT_SPACING == pytest.approx(2**-0.5)


@pytest.mark.parametrize("field,value", [
    ("model", "bogus"),
    ("nx", 1),
    ("ny", 0),
    ("spacing", 0.0),
    ("t", -1.0),
    ("omega", -0.1),
    ("bigomega", -0.2),
    ("tol", 0.0),
    ("gap_tol", -1e-9),
    ("margin", 0),
    ("state", -1),
    ("n_fermions", 0),
    ("axis", "diagonal"),
    ("bisect_tol", 0.0),
])
def test_validation_names_offending_field(field, value):
    cfg = RunConfig(**{field: value})
    with pytest.raises(ConfigError) as info:
        cfg.validate()
    assert info.value.field == field


def test_n_states_resolution():
    assert RunConfig().resolved_n_states() == 12
    assert RunConfig(n_fermions=50).resolved_n_states() == 58
    assert RunConfig(n_fermions=2).resolved_n_states() == 12
    assert RunConfig(n_states=5, n_fermions=50).resolved_n_states() == 5


def test_load_json_config(tmp_path):
    path = tmp_path / "run.json"
    path.write_text(json.dumps({"model": "continuum", "nx": 24, "omega": 0.2}))
    values = load_config_file(str(path))
    assert values == {"model": "continuum", "nx": 24, "omega": 0.2}


def test_load_key_value_config(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text(
        "# trap setup\n"
        "model = hubbard\n"
        "nx = 40\n"
        "omega = 0.25\n"
        "\n"
        "dump_matrix = true\n"
    )
    values = load_config_file(str(path))
    assert values["model"] == "hubbard"
    assert values["nx"] == 40
    assert values["omega"] == pytest.approx(0.25)
    assert values["dump_matrix"] is True


def test_unknown_key_rejected(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("frequencyy = 0.1\n")
    with pytest.raises(ConfigError):
        load_config_file(str(path))


def test_merge_precedence():
    cfg = merge_config({"omega": 0.2, "nx": 30}, {"omega": 0.3, "ny": None})
    assert cfg.omega == 0.3        # flag beats file
    assert cfg.nx == 30            # file beats default
    assert cfg.ny == 100           # absent flag leaves the default
    assert cfg.spacing == DEFAULT_SPACING


def test_merge_without_file():
    cfg = merge_config(None, {"model": "continuum", "bigomega": 0.05})
    assert cfg.model == "continuum"
    assert cfg.bigomega == 0.05
