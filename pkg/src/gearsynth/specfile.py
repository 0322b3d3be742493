"""Plain ``key = value`` spec files.

Synthesis spec (``#`` starts a comment, blank lines ignored)::

    target_ratio = 20          # required, integer, decimal or p/q
    rotor_bore_mm = 79.4       # required
    module_mm = 0.6            # required
    n_planets = 4
    min_teeth_sun = 17
    min_teeth_planet_in = 17
    min_teeth_planet_out = 17
    alpha_min_rad = 0.1
    ratio_tolerance = 0        # relative; 0 means exact ratio
    top_k = 10

Actuator fixtures use the same syntax with one ``[name]`` section per
actuator, each carrying every key of :class:`~gearsynth.actuator.ActuatorSpec`.
"""

from __future__ import annotations

from pathlib import Path
from typing import Union

from .actuator import ACTUATOR_KEYS, ActuatorSpec
from .gear_model import SpecError, SynthesisSpec

REQUIRED_KEYS = ("target_ratio", "rotor_bore_mm", "module_mm")
OPTIONAL_KEYS = {
    "n_planets": "4",
    "min_teeth_sun": "17",
    "min_teeth_planet_in": "17",
    "min_teeth_planet_out": "17",
    "alpha_min_rad": "0.1",
    "ratio_tolerance": "0",
    "top_k": "10",
}
INT_KEYS = ("n_planets", "min_teeth_sun", "min_teeth_planet_in", "min_teeth_planet_out", "top_k")


class SpecFileError(SpecError):
    def __init__(self, message: str, path=None, line: int | None = None):
        where = f"{path}" if path is not None else "<spec>"
        if line is not None:
            where += f":{line}"
        super().__init__(f"{where}: {message}")
        self.line = line


def _read(source: Union[str, Path]) -> tuple[str, object]:
    path = Path(source)
    try:
        return path.read_text(encoding="utf-8"), path
    except OSError as exc:
        raise SpecFileError(f"cannot read spec file ({exc.strerror})", path) from None


def parse_sections(text: str, path=None) -> list[tuple[str | None, dict[str, tuple[str, int]]]]:
    """Split *text* into ``(section, {key: (value, line)})`` blocks.

    Keys before any ``[section]`` header land in a ``None`` section.
    """
    sections = [(None, {})]
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            name = line[1:-1].strip()
            if not name:
                raise SpecFileError("empty section name", path, lineno)
            if any(s == name for s, _ in sections):
                raise SpecFileError(f"duplicate section [{name}]", path, lineno)
            sections.append((name, {}))
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key:
            raise SpecFileError(f"expected 'key = value', got {raw.strip()!r}", path, lineno)
        if not value:
            raise SpecFileError(f"missing value for {key}", path, lineno)
        entries = sections[-1][1]
        if key in entries:
            raise SpecFileError(f"duplicate key {key}", path, lineno)
        entries[key] = (value, lineno)
    if not sections[0][1]:
        sections.pop(0)
    return sections


def _to_int(key: str, value: str, path, line: int) -> int:
    try:
        return int(value)
    except ValueError:
        raise SpecFileError(f"{key} must be an integer, got {value!r}", path, line) from None


def spec_from_mapping(entries: dict[str, tuple[str, int]], path=None) -> SynthesisSpec:
    for key, (_, line) in entries.items():
        if key not in REQUIRED_KEYS and key not in OPTIONAL_KEYS:
            raise SpecFileError(f"unknown key {key!r}", path, line)
    for key in REQUIRED_KEYS:
        if key not in entries:
            raise SpecFileError(f"missing required key {key!r}", path)

    kwargs, lines = {}, {}
    for key in (*REQUIRED_KEYS, *OPTIONAL_KEYS):
        value, line = entries.get(key, (OPTIONAL_KEYS.get(key), None))
        lines[key] = line
        if key in INT_KEYS:
            kwargs[key] = _to_int(key, value, path, line)
        elif key == "alpha_min_rad":
            try:
                kwargs[key] = float(value)
            except ValueError:
                raise SpecFileError(f"{key} must be a number, got {value!r}", path, line) from None
        else:
            kwargs[key] = value
    try:
        return SynthesisSpec(**kwargs)
    except SpecError as exc:
        # point at the offending key's line where the message names one
        line = next((lines[k] for k in lines if str(exc).startswith(k)), None)
        raise SpecFileError(str(exc), path, line) from None


def parse_spec(text: str, path=None) -> SynthesisSpec:
    sections = parse_sections(text, path)
    if len(sections) != 1 or sections[0][0] is not None:
        raise SpecFileError("spec files take no [section] headers", path)
    return spec_from_mapping(sections[0][1], path)


def load_spec(source: Union[str, Path]) -> SynthesisSpec:
    text, path = _read(source)
    return parse_spec(text, path)


def parse_actuators(text: str, path=None) -> list[ActuatorSpec]:
    specs = []
    sections = parse_sections(text, path)
    if not sections:
        raise SpecFileError("no actuator sections found", path)
    for name, entries in sections:
        if name is None:
            first = min(line for _, line in entries.values())
            raise SpecFileError("key outside an [actuator] section", path, first)
        for key, (_, line) in entries.items():
            if key not in ACTUATOR_KEYS:
                raise SpecFileError(f"unknown key {key!r} in [{name}]", path, line)
        missing = [k for k in ACTUATOR_KEYS if k not in entries]
        if missing:
            raise SpecFileError(f"[{name}] missing {', '.join(missing)}", path)
        try:
            specs.append(ActuatorSpec(name, **{k: v for k, (v, _) in entries.items()}))
        except SpecError as exc:
            raise SpecFileError(f"[{name}] {exc}", path) from None
    return specs


def load_actuators(source: Union[str, Path]) -> list[ActuatorSpec]:
    text, path = _read(source)
    return parse_actuators(text, path)
