import json
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from abdirac.errors import DomainError, UsageError
from abdirac.params import (
    ELECTRON_MASS,
    HBAR,
    SPEED_OF_LIGHT,
    CylinderConfig,
    PhysicalInput,
    RingConfig,
    alpha_from_fermi,
    beta_from_field,
    mu_from_physical,
    read_config,
)

positive = st.floats(min_value=1e-3, max_value=1e3, allow_nan=False)


def test_insb_ring_mu():
    assert 3494 <= mu_from_physical(0.0135 * ELECTRON_MASS, 100e-9) <= 3496


def test_compton_radius_gives_unit_mu():
    radius = HBAR / (ELECTRON_MASS * SPEED_OF_LIGHT)
    assert mu_from_physical(ELECTRON_MASS, radius) == pytest.approx(1.0, rel=1e-14)


def test_free_electron_mu():
    assert mu_from_physical(ELECTRON_MASS, 100e-9) == pytest.approx(2.5896e5, rel=1e-4)


@pytest.mark.parametrize("mass, radius", [(0, 1e-7), (1e-31, 0), (-1e-31, 1e-7)])
def test_mu_rejects_nonpositive(mass, radius):
    with pytest.raises(DomainError):
        mu_from_physical(mass, radius)


def test_beta_values():
    assert beta_from_field(0.0, 100e-9) == 0.0
    assert beta_from_field(1e-6, 100e-9) == pytest.approx(7.596e-6, abs=1e-9)
    assert beta_from_field(-1e-6, 100e-9) == -beta_from_field(1e-6, 100e-9)
    with pytest.raises(DomainError):
        beta_from_field(1.0, 0.0)


@given(positive, positive)
def test_mu_linear_in_mass_and_radius(m, r):
    base = mu_from_physical(m * ELECTRON_MASS, r * 1e-9)
    assert mu_from_physical(2 * m * ELECTRON_MASS, r * 1e-9) == pytest.approx(2 * base, rel=1e-14)
    assert mu_from_physical(m * ELECTRON_MASS, 2 * r * 1e-9) == pytest.approx(2 * base, rel=1e-14)


@given(st.floats(-10, 10).filter(lambda b: b == 0 or abs(b) > 1e-200), positive)
def test_beta_linear_in_field_quadratic_in_radius(b, r):
    base = beta_from_field(b, r * 1e-9)
    assert beta_from_field(2 * b, r * 1e-9) == pytest.approx(2 * base, rel=1e-14, abs=1e-300)
    assert beta_from_field(b, 2 * r * 1e-9) == pytest.approx(4 * base, rel=1e-14, abs=1e-300)


def test_alpha_from_fermi():
    assert alpha_from_fermi(7.0, 0.0) == 0.0
    assert alpha_from_fermi(1000.0, 0.125) == pytest.approx(math.sqrt(0.125 * 2000.125), rel=1e-15)
    assert alpha_from_fermi(1000.0, 0.125) == pytest.approx(15.8119, abs=1e-4)
    with pytest.raises(DomainError):
        alpha_from_fermi(1.0, -0.1)


def test_alpha_small_fermi_limit():
    ratios = [alpha_from_fermi(1000.0, e) / alpha_from_fermi(1000.0, e, exact=False) for e in (10.0, 1.0, 0.01)]
    assert ratios[0] > ratios[1] > ratios[2] > 1.0
    assert ratios[-1] - 1 < 1e-5


def test_configs_validate():
    with pytest.raises(DomainError):
        RingConfig(mu=-1.0)
    with pytest.raises(DomainError):
        RingConfig(mu=1.0, beta=math.nan)
    with pytest.raises(DomainError):
        CylinderConfig(mu=1.0, aspect=0.0)
    cfg = CylinderConfig(mu=1.0, aspect=2.0)
    assert cfg.finite and cfg.length == pytest.approx(math.pi / 2)
    assert not CylinderConfig(mu=1.0).finite
    assert RingConfig(1.0, 1e-9).perturbative and not RingConfig(1.0, 1e-3).perturbative


def test_read_config_json_and_keyvalue(tmp_path):
    js = tmp_path / "s.json"
    js.write_text(json.dumps({"mass_me": 0.0135, "radius_m": 1e-7, "field_T": 1e-6, "fermi_eV": 0.01}))
    kv = tmp_path / "s.cfg"
    kv.write_text("# InSb ring\nmass_me = 0.0135\nradius_m = 1e-7\nfield_T = 1e-6\nfermi_eV = 0.01\n")
    a, b = read_config(js), read_config(kv)
    assert a == b
    assert 3494 <= a.mu() <= 3496
    assert a.beta() == pytest.approx(7.596e-6, abs=1e-9)
    eps = a.fermi_scaled()
    assert a.alpha() == pytest.approx(math.sqrt(eps * (eps + 2 * a.mu())))


def test_read_config_rejects_unknown_and_missing(tmp_path):
    bad = tmp_path / "bad.cfg"
    bad.write_text("mass_me = 1\nradius_m = 1e-7\ncolour = red\n")
    with pytest.raises(UsageError):
        read_config(bad)
    with pytest.raises(UsageError):
        PhysicalInput.from_mapping({"mass_me": 1})
    with pytest.raises(DomainError):
        PhysicalInput(mass=1e-31, radius=-1.0)
