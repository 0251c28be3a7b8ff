"""INI scenario files: parsing, validation with line diagnostics, and sweep expansion.

A file either names a catalogue case (``[scenario] case = ...`` plus a
``[case]`` block) or spells out both detectors in ``[alice]`` and ``[bob]``.
``[sweep]`` maps dotted keys such as ``case.omega_b`` or ``bob.gap`` to grids.
"""
from __future__ import annotations

import configparser
import itertools
import math
import re
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import numpy as np

from . import closedform, kinematics, switching
from .closedform import CaseParams, ClosedFormCase
from .errors import ConfigurationError, DomainError
from .scenario import DetectorConfig, Scenario
from .signal import QuadratureConfig

METHODS = ("quadrature", "closed_form", "both")
OUTPUTS = ("coefficients", "channel", "capacities")
WORLDLINES = ("rest", "inertial", "accelerated")
SWITCHINGS = ("sudden", "gaussian", "exponential", "shadow")

_CASE_KEYS = {f: float for f in ("omega_a", "omega_b", "L", "T", "v", "a", "lam_a", "lam_b", "gap", "T_b", "sigma")}
_DETECTOR_KEYS = {
    "coupling": float,
    "gap": float,
    "worldline": str,
    "position": "vector",
    "velocity": "vector",
    "acceleration": float,
    "switching": str,
    "start": float,
    "duration": float,
    "center": float,
    "width": float,
    "sigma": float,
}
_QUAD_KEYS = {"rel_tol": float, "abs_tol": float, "max_depth": int, "points_per_period": int, "tail_tol": float}
_SCENARIO_KEYS = {"dimension": int, "method": str, "output": str, "case": str, "cutoff": float}
_CHANNEL_KEYS = {"kappa": float, "p2": float, "eps": float}
_SECTIONS = {
    "scenario": _SCENARIO_KEYS,
    "case": _CASE_KEYS,
    "alice": _DETECTOR_KEYS,
    "bob": _DETECTOR_KEYS,
    "quadrature": _QUAD_KEYS,
    "channel": _CHANNEL_KEYS,
}
MAX_GRID = 100_000


class SchemaError(ConfigurationError):
    """Invalid scenario file; ``line`` and ``key`` locate the problem."""

    def __init__(self, message: str, line: Optional[int] = None, key: Optional[str] = None, path: str = ""):
        where = f"{path}:{line}" if line else path or "<config>"
        super().__init__(f"{where}: {key + ': ' if key else ''}{message}")
        self.line = line
        self.key = key


@dataclass
class ScenarioFile:
    method: str
    output: str
    quadrature: QuadratureConfig
    case: Optional[ClosedFormCase]
    values: Dict[str, Dict[str, object]]
    sweep: List[Tuple[str, np.ndarray]] = field(default_factory=list)
    source: str = ""

    def points(self) -> List[Dict[str, float]]:
        """Sweep points in row-major order of the ``[sweep]`` keys."""
        if not self.sweep:
            return [{}]
        names = [k for k, _ in self.sweep]
        return [dict(zip(names, combo)) for combo in itertools.product(*(g for _, g in self.sweep))]

    def build(self, point: Dict[str, float]) -> Tuple[Scenario, Optional[CaseParams]]:
        vals = {s: dict(v) for s, v in self.values.items()}
        for key, x in point.items():
            sec, name = key.split(".", 1)
            vals.setdefault(sec, {})[name] = float(x)
        cutoff = vals.get("scenario", {}).get("cutoff")
        if self.case is not None:
            params = CaseParams(**vals.get("case", {}))
            sc = closedform.build_scenario(self.case, params)
            if cutoff is not None:
                sc = replace(sc, cutoff=cutoff)
            return sc, params
        dim = int(vals["scenario"]["dimension"])
        alice = _detector(vals["alice"], dim, "alice")
        bob = _detector(vals["bob"], dim, "bob")
        kw = {} if cutoff is None else {"cutoff": cutoff}
        return Scenario(dim, alice, bob, **kw), None


def _vector(v, dim: int) -> tuple:
    if isinstance(v, float):
        v = (v,)
    v = tuple(v) + (0.0,) * (dim - len(v))
    if len(v) != dim:
        raise ConfigurationError(f"vector has {len(v)} components for dimension {dim}")
    return v


def _detector(d: Dict[str, object], dim: int, who: str) -> DetectorConfig:
    wl = d.get("worldline", "rest")
    if wl == "rest":
        world = kinematics.Rest(_vector(d.get("position", 0.0), dim))
    elif wl == "inertial":
        world = kinematics.Inertial(_vector(d.get("velocity", 0.0), dim), _vector(d.get("position", 0.0), dim))
    else:
        world = kinematics.UniformAcceleration(float(d["acceleration"]), dim=dim)
    sw = d.get("switching", "shadow" if who == "bob" else "sudden")
    if sw == "sudden":
        prof = switching.Sudden(float(d.get("start", 0.0)), float(d["duration"]))
    elif sw == "gaussian":
        prof = switching.Gaussian(float(d.get("center", 0.0)), float(d["width"]))
    elif sw == "exponential":
        prof = switching.ExponentialDecay(float(d["sigma"]))
    else:
        prof = None
    return DetectorConfig(float(d.get("coupling", 1.0)), float(d.get("gap", 0.0)), world, prof)


_GRID = re.compile(r"^(linspace|geomspace)\(\s*([^,]+),\s*([^,]+),\s*([^,)]+)\)$")


def parse_grid(text: str) -> np.ndarray:
    """``linspace(a, b, n)``, ``geomspace(a, b, n)`` or a comma separated list."""
    text = text.strip()
    m = _GRID.match(text)
    if m:
        kind, a, b, n = m.groups()
        n = int(n)
        if not 1 <= n <= MAX_GRID:
            raise ValueError(f"grid size must be between 1 and {MAX_GRID}")
        grid = getattr(np, kind)(float(a), float(b), n)
    else:
        grid = np.array([float(x) for x in text.split(",") if x.strip()])
    if grid.size == 0 or not np.all(np.isfinite(grid)):
        raise ValueError("grid must be non-empty and finite")
    return grid


def _line_index(text: str) -> Dict[Tuple[str, str], int]:
    idx, sec = {}, None
    for no, raw in enumerate(text.splitlines(), 1):
        s = raw.strip()
        if s.startswith("[") and s.endswith("]"):
            sec = s[1:-1].strip().lower()
            idx[(sec, "")] = no
        elif sec and "=" in s and not s.startswith((";", "#")):
            idx[(sec, s.split("=", 1)[0].strip().lower())] = no
    return idx


def _convert(kind, raw: str):
    if kind == "vector":
        parts = [float(x) for x in raw.split(",")]
        return parts[0] if len(parts) == 1 else tuple(parts)
    if kind is float:
        x = float(raw)
        if not math.isfinite(x):
            raise ValueError("must be finite")
        return x
    return kind(raw.strip().lower() if kind is str else raw)


def loads(text: str, source: str = "<string>") -> ScenarioFile:
    """Parse and validate scenario file contents."""
    lines = _line_index(text)
    cp = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    cp.optionxform = str
    try:
        cp.read_string(text, source=source)
    except configparser.Error as exc:
        raise SchemaError(str(exc).splitlines()[0], getattr(exc, "lineno", None), path=source) from None

    def fail(msg, sec, key=None):
        # a missing key is reported at its section header
        line = lines.get((sec, (key or "").lower())) or lines.get((sec, ""))
        raise SchemaError(msg, line, f"[{sec}] {key}" if key else f"[{sec}]", source)

    values: Dict[str, Dict[str, object]] = {}
    for sec in cp.sections():
        lsec = sec.lower()
        if lsec == "sweep":
            continue
        if lsec not in _SECTIONS:
            fail("unknown section", lsec)
        schema = {k.lower(): (k, t) for k, t in _SECTIONS[lsec].items()}
        out = values.setdefault(lsec, {})
        for key, raw in cp.items(sec):
            if key.lower() not in schema:
                fail("unknown key", lsec, key)
            name, kind = schema[key.lower()]
            try:
                out[name] = _convert(kind, raw)
            except (TypeError, ValueError) as exc:
                fail(f"bad value {raw!r} ({exc})", lsec, key)

    scen = values.setdefault("scenario", {})
    method = scen.get("method", "quadrature")
    if method not in METHODS:
        fail(f"method must be one of {', '.join(METHODS)}", "scenario", "method")
    output = scen.get("output", "coefficients")
    if output not in OUTPUTS:
        fail(f"output must be one of {', '.join(OUTPUTS)}", "scenario", "output")

    case = None
    if "case" in scen:
        try:
            case = ClosedFormCase(scen["case"])
        except ValueError:
            fail(f"unknown case; choose from {', '.join(c.value for c in ClosedFormCase)}", "scenario", "case")
        if "alice" in values or "bob" in values:
            fail("a catalogue case takes a [case] block, not detector blocks", "scenario", "case")
    else:
        if method != "quadrature":
            fail("closed_form and both need a catalogue case", "scenario", "method")
        if scen.get("dimension") not in (1, 2, 3):
            fail("dimension must be 1, 2 or 3", "scenario", "dimension")
        for who in ("alice", "bob"):
            if who not in values:
                fail("missing detector block", who)
            det = values[who]
            wl = det.get("worldline", "rest")
            if wl not in WORLDLINES:
                fail(f"worldline must be one of {', '.join(WORLDLINES)}", who, "worldline")
            if wl == "accelerated" and "acceleration" not in det:
                fail("accelerated worldline needs acceleration", who, "acceleration")
            sw = det.get("switching", "shadow" if who == "bob" else "sudden")
            if sw not in SWITCHINGS or (sw == "shadow" and who == "alice"):
                fail("unsupported switching", who, "switching")
            need = {"sudden": "duration", "gaussian": "width", "exponential": "sigma"}.get(sw)
            if need and need not in det:
                fail(f"{sw} switching needs {need}", who, need)

    q = values.get("quadrature", {})
    try:
        quad = QuadratureConfig(**q)
    except (TypeError, ValueError, DomainError, ConfigurationError) as exc:
        fail(str(exc), "quadrature")

    sweep: List[Tuple[str, np.ndarray]] = []
    if cp.has_section("sweep"):
        for key, raw in cp.items("sweep"):
            sec, _, name = key.partition(".")
            sec = sec.lower()
            if sec not in ("case", "alice", "bob") or not name:
                fail("sweep keys look like case.omega_b or bob.gap", "sweep", key)
            kinds = _SECTIONS[sec]
            if name not in kinds or kinds[name] is not float:
                fail("not a numeric parameter", "sweep", key)
            if (sec == "case") != (case is not None):
                fail("sweep key does not match the scenario style", "sweep", key)
            try:
                sweep.append((f"{sec}.{name}", parse_grid(raw)))
            except ValueError as exc:
                fail(f"bad grid ({exc})", "sweep", key)
    total = int(np.prod([g.size for _, g in sweep])) if sweep else 1
    if total > MAX_GRID:
        fail(f"sweep has {total} points, more than {MAX_GRID}", "sweep")

    sf = ScenarioFile(method, output, quad, case, values, sweep, source)
    try:
        for point in (sf.points()[0], sf.points()[-1]):
            sf.build(point)
    except (ConfigurationError, DomainError, KeyError, ValueError) as exc:
        raise SchemaError(f"scenario cannot be built: {exc}", path=source) from None
    return sf


def load(path) -> ScenarioFile:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise SchemaError(f"cannot read file ({exc.strerror})", path=str(p)) from None
    return loads(text, str(p))
