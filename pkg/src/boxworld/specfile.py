"""System description files and the label/effect expression grammar.

System files are YAML with a single required key:

    systems: [[2, 2], [2, 3]]

one inner list of outcome counts per system. Labels on the command line use
one grammar everywhere: a component is "X[a|x]@i" (outcome a of measurement
x on system i) or "U@i" (the unit on system i); a joint label joins one
component per system with "*"; an effect expression sums joint labels with
"+". Components may be written in any system order.
"""

from __future__ import annotations

import re
from pathlib import Path

import yaml

from .errors import InvalidSpec, ParseError
from .model import (
    UNIT,
    JointEffectLabel,
    LocalEffectLabel,
    MultiSpec,
    SystemSpec,
)

_COMPONENT = re.compile(r"^(?:X\[(\d+)\|(\d+)\]|U)@(\d+)$")


def parse_system_file(path: str | Path) -> MultiSpec:
    """Parse a system description file; ParseError carries line/column."""
    text = Path(path).read_text()
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        if mark is not None:
            raise ParseError(
                f"invalid YAML: {getattr(exc, 'problem', exc)}",
                line=mark.line + 1,
                column=mark.column + 1,
            ) from exc
        raise ParseError(f"invalid YAML: {exc}") from exc
    if not isinstance(data, dict) or "systems" not in data:
        raise ParseError("system file must be a mapping with a 'systems' key", line=1)
    systems = data["systems"]
    if not isinstance(systems, list) or not systems:
        raise ParseError("'systems' must be a non-empty list of outcome-count lists", line=1)
    specs = []
    for i, counts in enumerate(systems):
        if not isinstance(counts, list) or not counts:
            raise ParseError(f"system {i + 1} must be a non-empty list of outcome counts")
        try:
            specs.append(SystemSpec(tuple(counts)))
        except InvalidSpec as exc:
            raise ParseError(f"system {i + 1}: {exc}") from exc
    return MultiSpec(tuple(specs))


def parse_component(token: str) -> tuple[int, LocalEffectLabel]:
    """One 'X[a|x]@i' or 'U@i' token; returns (1-based system index, label)."""
    m = _COMPONENT.match(token.strip())
    if m is None:
        raise ParseError(f"cannot parse component {token!r}; expected X[a|x]@i or U@i")
    outcome, measurement, system = m.groups()
    if outcome is None:
        return int(system), UNIT
    return int(system), LocalEffectLabel(int(measurement), int(outcome))


def parse_joint_label(multi: MultiSpec, text: str) -> JointEffectLabel:
    """A '*'-joined joint label covering every system exactly once."""
    components: dict[int, LocalEffectLabel] = {}
    for token in text.split("*"):
        system, label = parse_component(token)
        if not 1 <= system <= multi.size:
            raise ParseError(f"system {system} outside 1..{multi.size} in {text!r}")
        if system in components:
            raise ParseError(f"system {system} appears twice in {text!r}")
        components[system] = label
    missing = [str(i) for i in range(1, multi.size + 1) if i not in components]
    if missing:
        raise ParseError(f"label {text!r} misses system(s) {', '.join(missing)}")
    return JointEffectLabel(tuple(components[i] for i in range(1, multi.size + 1)))


def parse_effect_expression(multi: MultiSpec, text: str) -> list[JointEffectLabel]:
    """A '+'-joined sum of joint labels."""
    terms = [t for t in (part.strip() for part in text.split("+")) if t]
    if not terms:
        raise ParseError(f"empty effect expression {text!r}")
    return [parse_joint_label(multi, t) for t in terms]
