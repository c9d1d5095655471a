import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from sivalley.units import (HBAR2_2M0, SILICON, SiliconParams, UnitError, convert, dimension,
                            field_energy_per_nm, units_of)


def test_fixed_constants():
    assert convert(1.0, "Ry", "eV") == pytest.approx(13.605693, rel=1e-12)
    assert convert(1.0, "bohr", "nm") == pytest.approx(0.0529177, rel=1e-12)
    assert HBAR2_2M0 == pytest.approx(0.0380998, rel=1e-6)
    # e F for 1 kV/cm is 1e-4 eV/nm
    assert field_energy_per_nm(1.0) == pytest.approx(1e-4, rel=1e-14)


def test_cross_dimension_raises():
    with pytest.raises(UnitError, match="temperature"):
        convert(1.0, "K", "eV")
    with pytest.raises(UnitError):
        convert(1.0, "furlong", "nm")


def test_aliases():
    assert convert(1.0, "μeV", "eV") == pytest.approx(1e-6)
    assert dimension("Tesla") == "magnetic"
    assert "kV/cm" in units_of("field")


@given(st.floats(min_value=-1e6, max_value=1e6, allow_nan=False),
       st.sampled_from(["eV", "meV", "ueV", "Ry", "Ha"]), st.sampled_from(["eV", "meV", "ueV", "Ry", "Ha"]))
def test_round_trip(x, a, b):
    assert convert(convert(x, a, b), b, a) == pytest.approx(x, rel=1e-12, abs=1e-300)


def test_silicon_validation():
    assert SILICON.k0 == pytest.approx(0.85 * 2 * math.pi / 0.543)
    with pytest.raises(ValueError):
        SiliconParams(m_l=0.1, m_t=0.19)
    with pytest.raises(ValueError):
        SiliconParams(density_g_cm3=-1.0)
