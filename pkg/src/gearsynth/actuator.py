"""Output-side envelope of a geared actuator from motor constants.

Values are kept as :class:`decimal.Decimal` so that headline figures quoted
as decimals (0.32 N*m/A, 50 A, ratio 20) multiply out exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from decimal import Decimal, InvalidOperation
from fractions import Fraction

from .gear_model import SpecError


def _as_decimal(value, name: str) -> Decimal:
    if isinstance(value, bool):
        raise SpecError(f"{name} must be a number, got {value!r}")
    if isinstance(value, Fraction):
        value = Decimal(value.numerator) / Decimal(value.denominator)
    try:
        result = value if isinstance(value, Decimal) else Decimal(str(value).strip())
    except InvalidOperation:
        raise SpecError(f"{name} must be a number, got {value!r}") from None
    if not result.is_finite() or result <= 0:
        raise SpecError(f"{name} must be positive")
    return result


@dataclass(frozen=True)
class ActuatorSpec:
    name: str
    torque_constant_nm_per_a: Decimal
    peak_current_a: Decimal
    gear_ratio: Decimal
    peak_output_speed_rad_s: Decimal
    bus_voltage_v: Decimal
    rotor_inertia_kg_m2: Decimal
    mass_kg: Decimal

    def __post_init__(self):
        if not self.name:
            raise SpecError("actuator name must be non-empty")
        for f in fields(self)[1:]:
            object.__setattr__(self, f.name, _as_decimal(getattr(self, f.name), f.name))


ACTUATOR_KEYS = tuple(f.name for f in fields(ActuatorSpec)[1:])


def peak_output_torque(spec: ActuatorSpec) -> Decimal:
    """k_t * I_peak * G, in N*m (no saturation or thermal derating)."""
    return spec.torque_constant_nm_per_a * spec.peak_current_a * spec.gear_ratio


def motor_side_speed(spec: ActuatorSpec) -> Decimal:
    return spec.peak_output_speed_rad_s * spec.gear_ratio


def reflected_inertia(spec: ActuatorSpec) -> Decimal:
    """Rotor inertia seen at the output, J * G**2."""
    return spec.rotor_inertia_kg_m2 * spec.gear_ratio ** 2
