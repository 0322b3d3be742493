"""Tooth-count synthesis and checking for 3K compound planetary gearboxes."""

from .actuator import ActuatorSpec, motor_side_speed, peak_output_torque, reflected_inertia
from .gear_model import (
    ConstraintEntry,
    ConstraintReport,
    DegenerateRatioError,
    GearboxDesign,
    SpecError,
    SynthesisSpec,
    carrier_clearance,
    check_assembly,
    check_sizes,
    check_structural,
    cost,
    derive_rings,
    gear_ratio,
    pitch_diameters,
    validate,
    validate_many,
)
from .synthesizer import Solution, SolutionSet, oracle_synthesize, sweep, synthesize

__version__ = "0.1.0"
