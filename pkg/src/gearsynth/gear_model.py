"""Design types and constraint evaluation for 3K compound planetary gearboxes.

Gear naming used throughout::

    z_sun          sun gear, driven by the motor rotor
    z_planet_in    input planet, meshes the sun and the fixed ring
    z_planet_out   output planet (same shaft as z_planet_in), meshes the output ring
    z_ring_fixed   ring gear grounded to the housing
    z_ring_out     ring gear driving the joint output

Everything that decides feasibility is evaluated with integers or
``fractions.Fraction``; only the carrier clearance angle and the reported
cost are floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from decimal import Decimal
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Optional, Union

import numpy as np

Number = Union[int, float, str, Decimal, Fraction]

# Entry identifiers, in report order.
STRUCTURAL_RING_FIXED = "structural_ring_fixed"
STRUCTURAL_RING_OUT = "structural_ring_out"
ASSEMBLY_SUN_RING = "assembly_sun_ring"
ASSEMBLY_OUTPUT = "assembly_output"
RATIO = "ratio"
CLEARANCE = "clearance"
MIN_SUN = "min_sun"
MIN_PLANET_IN = "min_planet_in"
MIN_PLANET_OUT = "min_planet_out"
RING_FIXED_BOUND = "ring_fixed_bound"
DIFFERENTIAL_PLANETS = "differential_planets"
DIFFERENTIAL_RINGS = "differential_rings"

CONSTRAINT_IDS = (
    STRUCTURAL_RING_FIXED,
    STRUCTURAL_RING_OUT,
    ASSEMBLY_SUN_RING,
    ASSEMBLY_OUTPUT,
    RATIO,
    CLEARANCE,
    MIN_SUN,
    MIN_PLANET_IN,
    MIN_PLANET_OUT,
    RING_FIXED_BOUND,
    DIFFERENTIAL_PLANETS,
    DIFFERENTIAL_RINGS,
)

DEGENERATE = "degenerate-denominator"

DEFAULT_N_PLANETS = 4
DEFAULT_MIN_TEETH = 17
DEFAULT_ALPHA_MIN_RAD = 0.1
DEFAULT_TOP_K = 10

TEETH_FIELDS = ("z_sun", "z_planet_in", "z_planet_out", "z_ring_fixed", "z_ring_out")


class SpecError(ValueError):
    """Raised when a design or synthesis spec violates its invariants."""


class DegenerateRatioError(ArithmeticError):
    """The ratio formula has a zero denominator (kinematically singular train)."""


def as_fraction(value: Number, name: str) -> Fraction:
    """Coerce *value* to an exact Fraction.

    Floats go through their shortest repr so ``0.6`` becomes ``3/5`` rather
    than the binary expansion.
    """
    if isinstance(value, bool):
        raise SpecError(f"{name} must be a number, got {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Decimal)):
        return Fraction(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise SpecError(f"{name} must be finite, got {value!r}")
        return Fraction(repr(value))
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise SpecError(f"{name} must be a number or p/q, got {value!r}") from None
    raise SpecError(f"{name} must be a number, got {type(value).__name__}")


def _check_int(value, name: str, minimum: int) -> int:
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
        raise SpecError(f"{name} must be an integer, got {value!r}")
    if value < minimum:
        raise SpecError(f"{name} must be >= {minimum}, got {value}")
    return int(value)


@dataclass(frozen=True)
class GearboxDesign:
    """Five tooth counts plus the planet count and gear geometry."""

    z_sun: int
    z_planet_in: int
    z_planet_out: int
    z_ring_fixed: int
    z_ring_out: int
    n_planets: int = DEFAULT_N_PLANETS
    module_mm: Fraction = Fraction(3, 5)
    rotor_bore_mm: Fraction = Fraction(397, 5)

    def __post_init__(self):
        for name in TEETH_FIELDS:
            object.__setattr__(self, name, _check_int(getattr(self, name), name, 1))
        object.__setattr__(self, "n_planets", _check_int(self.n_planets, "n_planets", 2))
        for name in ("module_mm", "rotor_bore_mm"):
            value = as_fraction(getattr(self, name), name)
            if value <= 0:
                raise SpecError(f"{name} must be positive")
            object.__setattr__(self, name, value)

    @property
    def teeth(self) -> tuple[int, int, int, int, int]:
        return (self.z_sun, self.z_planet_in, self.z_planet_out,
                self.z_ring_fixed, self.z_ring_out)

    @property
    def key(self) -> tuple[int, int, int]:
        """Lexicographic tie-break key."""
        return (self.z_sun, self.z_planet_in, self.z_planet_out)


@dataclass(frozen=True)
class SynthesisSpec:
    """Target ratio, geometry, bounds and search options for one synthesis run."""

    target_ratio: Fraction
    rotor_bore_mm: Fraction
    module_mm: Fraction
    n_planets: int = DEFAULT_N_PLANETS
    min_teeth_sun: int = DEFAULT_MIN_TEETH
    min_teeth_planet_in: int = DEFAULT_MIN_TEETH
    min_teeth_planet_out: int = DEFAULT_MIN_TEETH
    alpha_min_rad: float = DEFAULT_ALPHA_MIN_RAD
    ratio_tolerance: Fraction = Fraction(0)
    top_k: int = DEFAULT_TOP_K
    # floor(rotor_bore_mm / module_mm), cached
    ring_bound: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        fix = lambda name, value: object.__setattr__(self, name, value)  # noqa: E731
        for name in ("target_ratio", "rotor_bore_mm", "module_mm", "ratio_tolerance"):
            fix(name, as_fraction(getattr(self, name), name))
        if self.target_ratio <= 1:
            raise SpecError("target_ratio must be greater than 1")
        if self.rotor_bore_mm <= 0:
            raise SpecError("rotor_bore_mm must be positive")
        if self.module_mm <= 0:
            raise SpecError("module_mm must be positive")
        if self.ratio_tolerance < 0:
            raise SpecError("ratio_tolerance must be non-negative")
        fix("n_planets", _check_int(self.n_planets, "n_planets", 2))
        for name in ("min_teeth_sun", "min_teeth_planet_in", "min_teeth_planet_out"):
            fix(name, _check_int(getattr(self, name), name, 1))
        fix("top_k", _check_int(self.top_k, "top_k", 1))

        alpha = self.alpha_min_rad
        if isinstance(alpha, bool) or not isinstance(alpha, (int, float, Fraction, Decimal)):
            raise SpecError(f"alpha_min_rad must be a number, got {alpha!r}")
        alpha = float(alpha)
        if not math.isfinite(alpha) or alpha < 0:
            raise SpecError("alpha_min_rad must be a finite number >= 0")
        if alpha >= math.pi / self.n_planets:
            raise SpecError(
                f"alpha_min_rad must be below pi/n_planets = {math.pi / self.n_planets:.6f}")
        fix("alpha_min_rad", alpha)
        fix("ring_bound", math.floor(self.rotor_bore_mm / self.module_mm))

    @property
    def bore_in_modules(self) -> Fraction:
        """D / M, the largest admissible fixed-ring tooth count as a rational."""
        return self.rotor_bore_mm / self.module_mm

    def replace(self, **changes) -> "SynthesisSpec":
        return replace(self, **changes)

    def design(self, z_sun: int, z_planet_in: int, z_planet_out: int,
               z_ring_fixed: Optional[int] = None,
               z_ring_out: Optional[int] = None) -> GearboxDesign:
        """Build a design carrying this spec's geometry.

        Missing ring counts are derived from the structural equalities.
        """
        zf, zo = derive_rings(z_sun, z_planet_in, z_planet_out)
        return GearboxDesign(
            z_sun, z_planet_in, z_planet_out,
            zf if z_ring_fixed is None else z_ring_fixed,
            zo if z_ring_out is None else z_ring_out,
            n_planets=self.n_planets, module_mm=self.module_mm,
            rotor_bore_mm=self.rotor_bore_mm)


@dataclass(frozen=True)
class ConstraintEntry:
    name: str
    satisfied: bool
    residual: Union[int, Fraction, float, None]
    note: Optional[str] = None


@dataclass(frozen=True)
class ConstraintReport:
    entries: tuple[ConstraintEntry, ...]

    @property
    def overall_feasible(self) -> bool:
        return all(e.satisfied for e in self.entries)

    def __getitem__(self, name: str) -> ConstraintEntry:
        for entry in self.entries:
            if entry.name == name:
                return entry
        raise KeyError(name)

    def __iter__(self) -> Iterator[ConstraintEntry]:
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def failed(self) -> list[str]:
        return [e.name for e in self.entries if not e.satisfied]


def derive_rings(z_sun: int, z_planet_in: int, z_planet_out: int) -> tuple[int, int]:
    """Ring tooth counts implied by coaxial meshing of sun, planets and rings."""
    if min(z_sun, z_planet_in, z_planet_out) <= 0:
        raise SpecError("tooth counts must be positive")
    return z_sun + 2 * z_planet_in, z_sun + z_planet_in + z_planet_out


def _ratio_terms(z_planet_in: int, z_planet_out: int, z_ring_fixed: int) -> tuple[int, int]:
    num = 2 * z_planet_in * (z_ring_fixed - z_planet_in + z_planet_out)
    den = (z_ring_fixed - 2 * z_planet_in) * (z_planet_in - z_planet_out)
    return num, den


def gear_ratio(design: GearboxDesign) -> Fraction:
    """Exact reduction ratio of the train (input sun : output ring)."""
    num, den = _ratio_terms(design.z_planet_in, design.z_planet_out, design.z_ring_fixed)
    if den == 0:
        raise DegenerateRatioError(
            f"ratio undefined for z_ring_fixed={design.z_ring_fixed}, "
            f"z_planet_in={design.z_planet_in}, z_planet_out={design.z_planet_out}")
    return Fraction(num, den)


def check_structural(design: GearboxDesign) -> tuple[ConstraintEntry, ConstraintEntry]:
    d = design
    r1 = d.z_ring_fixed - d.z_sun - 2 * d.z_planet_in
    r2 = d.z_ring_out - d.z_sun - d.z_planet_in - d.z_planet_out
    return (ConstraintEntry(STRUCTURAL_RING_FIXED, r1 == 0, r1),
            ConstraintEntry(STRUCTURAL_RING_OUT, r2 == 0, r2))


def check_assembly(design: GearboxDesign) -> tuple[ConstraintEntry, ConstraintEntry]:
    """Equal-spacing assembly conditions; residuals are the remainders."""
    d = design
    r1 = (d.z_ring_fixed + d.z_sun) % d.n_planets
    r2 = (2 * d.z_ring_out - 2 * d.z_planet_out) % d.n_planets
    return (ConstraintEntry(ASSEMBLY_SUN_RING, r1 == 0, r1),
            ConstraintEntry(ASSEMBLY_OUTPUT, r2 == 0, r2))


@lru_cache(maxsize=65536)
def clearance_angle(z_sun: int, z_planet_in: int, n_planets: int) -> float:
    """Angular gap left for a carrier spoke between adjacent input planets."""
    return math.pi / n_planets - math.asin(z_planet_in / (z_sun + z_planet_in))


def carrier_clearance(design: GearboxDesign) -> float:
    return clearance_angle(design.z_sun, design.z_planet_in, design.n_planets)


def check_sizes(design: GearboxDesign, spec: SynthesisSpec) -> tuple[ConstraintEntry, ...]:
    """Minimum sizes, the rotor-bore bound on the fixed ring, and the two
    planet/ring differentials."""
    d = design
    bound_slack = spec.bore_in_modules - d.z_ring_fixed
    diff_planets = d.z_planet_in - d.z_planet_out - d.n_planets
    diff_rings = d.z_ring_fixed - d.z_ring_out - d.n_planets
    return (
        ConstraintEntry(MIN_SUN, d.z_sun >= spec.min_teeth_sun,
                        d.z_sun - spec.min_teeth_sun),
        ConstraintEntry(MIN_PLANET_IN, d.z_planet_in >= spec.min_teeth_planet_in,
                        d.z_planet_in - spec.min_teeth_planet_in),
        ConstraintEntry(MIN_PLANET_OUT, d.z_planet_out >= spec.min_teeth_planet_out,
                        d.z_planet_out - spec.min_teeth_planet_out),
        ConstraintEntry(RING_FIXED_BOUND, bound_slack >= 0, bound_slack),
        ConstraintEntry(DIFFERENTIAL_PLANETS, diff_planets >= 0, diff_planets),
        ConstraintEntry(DIFFERENTIAL_RINGS, diff_rings >= 0, diff_rings),
    )


def ratio_within(ratio: Fraction, spec: SynthesisSpec) -> bool:
    return abs(ratio - spec.target_ratio) <= spec.ratio_tolerance * spec.target_ratio


def check_ratio(design: GearboxDesign, spec: SynthesisSpec) -> ConstraintEntry:
    try:
        ratio = gear_ratio(design)
    except DegenerateRatioError:
        return ConstraintEntry(RATIO, False, None, DEGENERATE)
    return ConstraintEntry(RATIO, ratio_within(ratio, spec), ratio - spec.target_ratio)


def cost_exact(design: GearboxDesign, spec: SynthesisSpec) -> Fraction:
    """Design cost as an exact rational; used for ranking."""
    d = design
    return (Fraction(1, d.z_sun * d.z_sun)
            + (d.z_ring_fixed - spec.bore_in_modules) ** 2
            + d.z_planet_in ** 2 + d.z_planet_out ** 2 + d.z_ring_out ** 2)


def cost(design: GearboxDesign, spec: SynthesisSpec) -> float:
    """Rewards a large sun and a fixed ring that fills the rotor bore while
    penalising planet and output-ring size."""
    return float(cost_exact(design, spec))


def validate(design: GearboxDesign, spec: SynthesisSpec) -> ConstraintReport:
    """Evaluate all twelve constraints.

    The planet count comes from the design and must match the spec; the bore
    bound and minimum sizes come from the spec.
    """
    if design.n_planets != spec.n_planets:
        raise SpecError(
            f"design has {design.n_planets} planets but spec has {spec.n_planets}")
    alpha = carrier_clearance(design)
    sizes = check_sizes(design, spec)
    return ConstraintReport((
        *check_structural(design),
        *check_assembly(design),
        check_ratio(design, spec),
        ConstraintEntry(CLEARANCE, alpha >= spec.alpha_min_rad, alpha - spec.alpha_min_rad),
        *sizes,
    ))


def pitch_diameters(design: GearboxDesign) -> tuple[float, float, float, float, float]:
    """Pitch diameters in mm, in the same order as ``design.teeth``."""
    return tuple(float(z * design.module_mm) for z in design.teeth)


# -- batch evaluation -------------------------------------------------------

def _needs_object_dtype(max_teeth: int, spec: SynthesisSpec) -> bool:
    t, tol = spec.target_ratio, spec.ratio_tolerance
    scale = max(t.numerator, t.denominator) * max(tol.numerator, tol.denominator, 1)
    return 24 * max_teeth ** 2 * scale * 2 >= 2 ** 62


def validate_many(z_sun, z_planet_in, z_planet_out, z_ring_fixed, z_ring_out,
                  spec: SynthesisSpec) -> dict[str, np.ndarray]:
    """Vectorised :func:`validate` over arrays of designs sharing *spec*.

    Returns one boolean array per constraint id. Decisions match
    ``validate(...)[name].satisfied`` element for element: integer tests are
    done in int64 (or Python ints when products could overflow) and the
    clearance angle is looked up from :func:`clearance_angle` per distinct
    (sun, planet) pair.
    """
    zs, p1, p2, zf, zo = (np.asarray(a, dtype=np.int64)
                          for a in (z_sun, z_planet_in, z_planet_out, z_ring_fixed, z_ring_out))
    n = spec.n_planets
    out: dict[str, np.ndarray] = {}
    out[STRUCTURAL_RING_FIXED] = zf - zs - 2 * p1 == 0
    out[STRUCTURAL_RING_OUT] = zo - zs - p1 - p2 == 0
    out[ASSEMBLY_SUN_RING] = (zf + zs) % n == 0
    out[ASSEMBLY_OUTPUT] = (2 * zo - 2 * p2) % n == 0

    biggest = int(max((a.max(initial=0) for a in (zs, p1, p2, zf, zo)), default=0))
    work = [p1, p2, zf]
    if _needs_object_dtype(biggest, spec):
        work = [a.astype(object) for a in work]
    w1, w2, wf = work
    num = 2 * w1 * (wf - w1 + w2)
    den = (wf - 2 * w1) * (w1 - w2)
    p, q = spec.target_ratio.numerator, spec.target_ratio.denominator
    a, b = spec.ratio_tolerance.numerator, spec.ratio_tolerance.denominator
    # |num/den - p/q| <= (a/b)(p/q)  <=>  b*|num*q - p*den| <= a*p*|den|
    gap = abs(num * q - p * den)
    out[RATIO] = np.asarray((den != 0) & (b * gap <= a * p * abs(den)), dtype=bool)

    if zs.size:
        pairs, inverse = np.unique(np.stack([zs.ravel(), p1.ravel()]), axis=1,
                                   return_inverse=True)
        table = np.array([clearance_angle(int(s), int(t), n) for s, t in pairs.T])
        alpha = table[inverse.ravel()].reshape(zs.shape)
        out[CLEARANCE] = alpha >= spec.alpha_min_rad
    else:
        out[CLEARANCE] = np.zeros(zs.shape, dtype=bool)

    out[MIN_SUN] = zs >= spec.min_teeth_sun
    out[MIN_PLANET_IN] = p1 >= spec.min_teeth_planet_in
    out[MIN_PLANET_OUT] = p2 >= spec.min_teeth_planet_out
    # zf integral, so zf <= D/M iff zf <= floor(D/M)
    out[RING_FIXED_BOUND] = zf <= spec.ring_bound
    out[DIFFERENTIAL_PLANETS] = p1 - p2 >= n
    out[DIFFERENTIAL_RINGS] = zf - zo >= n
    return out
