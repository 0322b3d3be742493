"""Global tooth-count synthesis by bounded enumeration.

The structural equalities leave three free counts (sun, input planet, output
planet), each bounded above by floor(D/M), so the whole design space is a
finite box that can be searched exhaustively. :func:`synthesize` walks only
the part of the box that survives the bore bound and the planet differential,
crediting the skipped ranges to those constraints arithmetically.
:func:`oracle_synthesize` evaluates every point of the box with
:func:`~gearsynth.gear_model.validate_many` and serves as the reference.

Both attribute each rejected candidate to the first constraint it fails in
:data:`PRUNE_ORDER`, so their ``prune_counts`` agree as well.
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np

from . import gear_model as gm
from .gear_model import GearboxDesign, SpecError, SynthesisSpec

log = logging.getLogger(__name__)

PRUNE_ORDER = (
    gm.STRUCTURAL_RING_FIXED,
    gm.STRUCTURAL_RING_OUT,
    gm.MIN_SUN,
    gm.MIN_PLANET_IN,
    gm.MIN_PLANET_OUT,
    gm.RING_FIXED_BOUND,
    gm.DIFFERENTIAL_PLANETS,
    gm.DIFFERENTIAL_RINGS,
    gm.RATIO,
    gm.ASSEMBLY_SUN_RING,
    gm.ASSEMBLY_OUTPUT,
    gm.CLEARANCE,
)

SWEEP_PARAMETERS = ("target_ratio", "module_mm", "n_planets")


@dataclass(frozen=True)
class Solution:
    design: GearboxDesign
    cost: float
    ratio: Fraction
    clearance_rad: float
    cost_exact: Fraction

    @property
    def sort_key(self):
        return (self.cost_exact, self.design.key)


@dataclass(frozen=True)
class SolutionSet:
    """Ranked outcome of one synthesis run.

    ``solutions`` holds the best ``top_k`` designs; ``feasible`` holds every
    feasible design in the same order.
    """

    spec_echo: SynthesisSpec
    solutions: tuple[Solution, ...]
    feasible: tuple[Solution, ...]
    candidates_examined: int
    prune_counts: dict

    @property
    def feasible_count(self) -> int:
        return len(self.feasible)

    @property
    def surviving_infeasible(self) -> int:
        return self.candidates_examined - sum(self.prune_counts.values()) - self.feasible_count

    @property
    def best(self) -> Optional[Solution]:
        return self.solutions[0] if self.solutions else None

    def top_pruner(self) -> Optional[tuple[str, int]]:
        """Constraint that rejected the most candidates (first in prune order on ties)."""
        ranked = sorted(PRUNE_ORDER, key=lambda name: -self.prune_counts.get(name, 0))
        if not ranked or self.prune_counts.get(ranked[0], 0) == 0:
            return None
        return ranked[0], self.prune_counts[ranked[0]]

    def contains(self, teeth: Sequence[int]) -> bool:
        return any(s.design.teeth == tuple(teeth) for s in self.feasible)


def _span(lo: int, hi: int) -> int:
    return max(0, hi - lo + 1)


def box_size(spec: SynthesisSpec) -> int:
    """Number of (sun, planet_in, planet_out) triples in the search box."""
    n = spec.ring_bound
    return (_span(spec.min_teeth_sun, n) * _span(spec.min_teeth_planet_in, n)
            * _span(spec.min_teeth_planet_out, n))


def make_solution(design: GearboxDesign, spec: SynthesisSpec) -> Solution:
    exact = gm.cost_exact(design, spec)
    return Solution(design, float(exact), gm.gear_ratio(design),
                    gm.carrier_clearance(design), exact)


def _rank(found: Iterable[Solution], spec: SynthesisSpec,
          examined: int, pruned: dict) -> SolutionSet:
    ordered = tuple(sorted(found, key=lambda s: s.sort_key))
    counts = {name: pruned.get(name, 0) for name in PRUNE_ORDER}
    return SolutionSet(spec, ordered[:spec.top_k], ordered, examined, counts)


def _search_range(spec: SynthesisSpec, sun_lo: int, sun_hi: int):
    """Pruned enumeration over sun counts in [sun_lo, sun_hi].

    Returns (feasible solutions, prune counts). Entire ranges rejected by the
    bore bound or the planet differential are counted without being visited.
    """
    n = spec.ring_bound
    n_p = spec.n_planets
    p1_min, p2_min = spec.min_teeth_planet_in, spec.min_teeth_planet_out
    p2_span = _span(p2_min, n)
    p, q = spec.target_ratio.numerator, spec.target_ratio.denominator
    a, b = spec.ratio_tolerance.numerator, spec.ratio_tolerance.denominator
    alpha_min = spec.alpha_min_rad

    pruned = dict.fromkeys(PRUNE_ORDER, 0)
    found = []
    for zs in range(sun_lo, sun_hi + 1):
        # fixed ring zs + 2*p1 must stay within the bore
        p1_top = min(n, (n - zs) // 2)
        pruned[gm.RING_FIXED_BOUND] += (_span(p1_min, n) - _span(p1_min, p1_top)) * p2_span
        for p1 in range(p1_min, p1_top + 1):
            p2_top = p1 - n_p
            kept = _span(p2_min, p2_top)
            pruned[gm.DIFFERENTIAL_PLANETS] += p2_span - kept
            if not kept:
                continue
            zf = zs + 2 * p1
            alpha = None
            for p2 in range(p2_min, p2_top + 1):
                # ratio = 2 p1 zo / (zs (p1 - p2)) once the rings are derived
                zo = zs + p1 + p2
                num = 2 * p1 * zo
                den = zs * (p1 - p2)
                if b * abs(num * q - p * den) > a * p * den:
                    pruned[gm.RATIO] += 1
                    continue
                if (zf + zs) % n_p:
                    pruned[gm.ASSEMBLY_SUN_RING] += 1
                    continue
                if (2 * zo - 2 * p2) % n_p:
                    pruned[gm.ASSEMBLY_OUTPUT] += 1
                    continue
                if alpha is None:
                    alpha = gm.clearance_angle(zs, p1, n_p)
                if alpha < alpha_min:
                    pruned[gm.CLEARANCE] += 1
                    continue
                found.append(make_solution(spec.design(zs, p1, p2, zf, zo), spec))
    return found, pruned


def _search_task(args):
    return _search_range(*args)


def _partition(lo: int, hi: int, parts: int) -> list[tuple[int, int]]:
    # contiguous chunks balanced on a rough per-sun workload estimate;
    # small suns leave the widest planet ranges
    total = hi - lo + 1
    if parts <= 1 or total <= 1:
        return [(lo, hi)]
    weights = [max(1, hi - zs) ** 2 for zs in range(lo, hi + 1)]
    target = sum(weights) / parts
    chunks, start, acc = [], lo, 0.0
    for i, zs in enumerate(range(lo, hi + 1)):
        acc += weights[i]
        if acc >= target and len(chunks) < parts - 1:
            chunks.append((start, zs))
            start, acc = zs + 1, 0.0
    if start <= hi:
        chunks.append((start, hi))
    return chunks


def synthesize(spec: SynthesisSpec, workers: int = 1) -> SolutionSet:
    """Globally optimal designs for *spec*, best ``top_k`` first.

    With ``workers > 1`` the sun-count range is split across processes; the
    merged result is identical to the single-process one.
    """
    if not isinstance(spec, SynthesisSpec):
        raise SpecError("synthesize expects a SynthesisSpec")
    examined = box_size(spec)
    lo, hi = spec.min_teeth_sun, spec.ring_bound
    if examined == 0:
        return _rank((), spec, 0, {})

    chunks = _partition(lo, hi, workers)
    if len(chunks) == 1:
        results = [_search_range(spec, lo, hi)]
    else:
        with ProcessPoolExecutor(max_workers=len(chunks)) as pool:
            results = list(pool.map(_search_task, [(spec, a, b) for a, b in chunks]))

    found, pruned = [], dict.fromkeys(PRUNE_ORDER, 0)
    for part_found, part_pruned in results:
        found.extend(part_found)
        for name, count in part_pruned.items():
            pruned[name] += count
    log.debug("synthesize: %d candidates, %d feasible", examined, len(found))
    return _rank(found, spec, examined, pruned)


def oracle_synthesize(spec: SynthesisSpec) -> SolutionSet:
    """Unpruned reference search: every triple in the box is validated."""
    if not isinstance(spec, SynthesisSpec):
        raise SpecError("oracle_synthesize expects a SynthesisSpec")
    n = spec.ring_bound
    axes = [np.arange(lo, n + 1, dtype=np.int64) for lo in
            (spec.min_teeth_sun, spec.min_teeth_planet_in, spec.min_teeth_planet_out)]
    zs, p1, p2 = (g.ravel() for g in np.meshgrid(*axes, indexing="ij"))
    zf, zo = zs + 2 * p1, zs + p1 + p2
    checks = gm.validate_many(zs, p1, p2, zf, zo, spec)

    pruned = {}
    alive = np.ones(zs.shape, dtype=bool)
    for name in PRUNE_ORDER:
        fails = alive & ~checks[name]
        pruned[name] = int(fails.sum())
        alive &= checks[name]
    found = [make_solution(spec.design(int(a), int(b), int(c)), spec)
             for a, b, c in zip(zs[alive], p1[alive], p2[alive])]
    return _rank(found, spec, int(zs.size), pruned)


@dataclass(frozen=True)
class SweepRow:
    value: object
    result: Optional[SolutionSet] = None
    error: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.error is None

    @property
    def best(self) -> Optional[Solution]:
        return self.result.best if self.result else None

    @property
    def feasible_count(self) -> int:
        return self.result.feasible_count if self.result else 0


def sweep(spec: SynthesisSpec, parameter: str, values: Sequence,
          workers: int = 1) -> list[SweepRow]:
    """Re-run synthesis with one spec field replaced by each of *values*.

    A value that makes the spec invalid yields an error row; the sweep continues.
    """
    if parameter not in SWEEP_PARAMETERS:
        raise SpecError(f"cannot sweep {parameter!r}; choose from {', '.join(SWEEP_PARAMETERS)}")
    if not values:
        raise SpecError("values must be non-empty")
    rows = []
    for value in values:
        try:
            varied = spec.replace(**{parameter: value})
        except SpecError as exc:
            rows.append(SweepRow(value, error=str(exc)))
            continue
        rows.append(SweepRow(value, synthesize(varied, workers=workers)))
    return rows
