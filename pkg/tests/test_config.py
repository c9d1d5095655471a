import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sivalley.config import ConfigError, RunConfig, load_config, parse_config


def test_defaults_round_trip():
    c = RunConfig()
    assert parse_config(c.render()).resolved() == c.resolved()


def test_units_converted():
    c = parse_config("field = 0.4 MV/cm\nband_T = 1.08 Ry*bohr\nb_field = 1500 mT\nphonon_T_grid = 50, 100 mK\n")
    assert c.field == pytest.approx(400.0)
    assert c.band_T == pytest.approx(1.08 * 13.605693 * 0.0529177)
    assert c.b_field == pytest.approx(1.5)
    assert c.phonon_T_grid == pytest.approx((0.05, 0.1))
    assert c.explicit == {"field", "band_T", "b_field", "phonon_T_grid"}


def test_range_inclusive():
    c = parse_config("field_grid = 0:500:20 kV/cm")
    assert len(c.field_grid) == 26 and c.field_grid[-1] == 500.0


@pytest.mark.parametrize("text", [
    "bogus = 1",
    "field = 400",
    "field = 400 K",
    "levels = 2.5",
    "levels = 3 nm",
    "field_grid = 0:10:0 kV/cm",
    "field = 1, 2 kV/cm",
    "barrier_mode = soft",
    "coupling_source = none",
    "no equals sign",
    "seed = 1\nseed = 2",
    "basis = 4, 4",
])
def test_rejections(text):
    with pytest.raises(ConfigError):
        parse_config(text)


def test_missing_file(tmp_path):
    with pytest.raises(ConfigError):
        load_config(tmp_path / "absent.cfg")


@settings(max_examples=30, deadline=None)
@given(st.lists(st.floats(0, 1000, allow_nan=False), min_size=1, max_size=6))
def test_grid_round_trip(values):
    c = RunConfig(field_grid=tuple(values))
    assert parse_config(c.render()).field_grid == tuple(values)
