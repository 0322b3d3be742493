from fractions import Fraction
from importlib import resources

import pytest

from gearsynth.specfile import (
    SpecFileError,
    load_actuators,
    load_spec,
    parse_actuators,
    parse_spec,
)

MINIMAL = "target_ratio = 20\nrotor_bore_mm = 79.4\nmodule_mm = 0.6\n"


def test_minimal_spec_takes_defaults():
    spec = parse_spec(MINIMAL)
    assert spec.target_ratio == 20 and spec.ring_bound == 132
    assert (spec.n_planets, spec.min_teeth_sun, spec.min_teeth_planet_in,
            spec.min_teeth_planet_out) == (4, 17, 17, 17)
    assert spec.alpha_min_rad == 0.1 and spec.ratio_tolerance == 0 and spec.top_k == 10


def test_comments_and_rational_ratio():
    spec = parse_spec("# header\n\ntarget_ratio = 41/2  # p/q\n"
                      "rotor_bore_mm=80\nmodule_mm = 1\nratio_tolerance = 0.01\n")
    assert spec.target_ratio == Fraction(41, 2)
    assert spec.ratio_tolerance == Fraction(1, 100)


@pytest.mark.parametrize("text, message, line", [
    (MINIMAL + "n_planet = 4\n", "unknown key 'n_planet'", 4),
    ("target_ratio = 20\nmodule_mm = 0.6\n", "missing required key 'rotor_bore_mm'", None),
    (MINIMAL + "top_k = ten\n", "top_k must be an integer", 4),
    (MINIMAL.replace("0.6", "0"), "module_mm must be positive", 3),
    (MINIMAL + "just words\n", "expected 'key = value'", 4),
    (MINIMAL + "top_k =\n", "missing value for top_k", 4),
    (MINIMAL + "module_mm = 1\n", "duplicate key module_mm", 4),
    (MINIMAL + "alpha_min_rad = big\n", "alpha_min_rad must be a number", 4),
    ("[x]\n" + MINIMAL, "no \\[section\\] headers", None),
])
def test_spec_errors(text, message, line):
    with pytest.raises(SpecFileError, match=message) as info:
        parse_spec(text, path="in.spec")
    assert info.value.line == line
    assert str(info.value).startswith("in.spec" + (f":{line}" if line else ""))


def test_bundled_spec_is_paper_instance():
    with resources.as_file(resources.files("gearsynth") / "data" / "d151.spec") as path:
        spec = load_spec(path)
    assert spec.target_ratio == 20 and spec.rotor_bore_mm == Fraction(397, 5)
    assert spec.module_mm == Fraction(3, 5) and spec.n_planets == 4


def test_missing_file(tmp_path):
    with pytest.raises(SpecFileError, match="cannot read"):
        load_spec(tmp_path / "absent.spec")


def test_bundled_actuators():
    with resources.as_file(resources.files("gearsynth") / "data" / "actuators.cfg") as path:
        specs = load_actuators(path)
    assert [s.name for s in specs] == ["D151", "D110A"]


ONE = """[A]
torque_constant_nm_per_a = 0.1
peak_current_a = 10
gear_ratio = 6
peak_output_speed_rad_s = 30
bus_voltage_v = 48
rotor_inertia_kg_m2 = 0.0001
mass_kg = 0.5
"""


@pytest.mark.parametrize("text, message", [
    ("", "no actuator sections"),
    ("mass_kg = 1\n" + ONE, "outside an \\[actuator\\] section"),
    (ONE + "colour = red\n", "unknown key 'colour'"),
    (ONE.replace("mass_kg = 0.5\n", ""), "missing mass_kg"),
    (ONE.replace("= 10", "= -10"), "peak_current_a must be positive"),
    (ONE + ONE, "duplicate section"),
    (ONE.replace("[A]", "[]"), "empty section name"),
])
def test_actuator_errors(text, message):
    with pytest.raises(SpecFileError, match=message):
        parse_actuators(text)
