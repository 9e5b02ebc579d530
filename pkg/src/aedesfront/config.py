"""Run configuration files.

Grammar: an INI document (``configparser``, ``#`` and ``;`` comments, no
interpolation). Sections and keys are a closed set; anything else is an
error. All problems found in one document are reported together.

::

    [model]            D, nu=0, K1=1, K2=1, homogenization_radius=50
    [profile.r]        kind = constant|step|bump|tabulated  + kind parameters
    [profile.gamma]    (same)
    [profile.mu1]      (same)
    [profile.mu2]      (same)
    [initial]          h0, and either a, b (cosine hump) or table = <file x M0 A0>
    [solver]           N=256, dt=0.01 | cfl, mu=1, horizon=10, stencil_order=2,
                       advection=hybrid
    [task]             name, task-specific keys (see TASK_KEYS)
    [output]           dir=out, formats=ndjson,csv,png, snapshot_every=0.5,
                       fields=false

Tabulated profiles give ``limit`` and either ``file`` (two columns, ``x value``)
or inline ``xs``/``values`` comma lists. Relative paths resolve against the
config file's directory.
"""

from __future__ import annotations

import configparser
import hashlib
import math
import os
from dataclasses import dataclass, field

import numpy as np

from .coefficients import KINDS, CoefficientProfile, ProfileSpec, _REQUIRED
from .errors import ConfigError, InvalidInitialData, InvalidProfile
from .frontfix import InitialData, SolverConfig

TASKS = ("simulate", "threshold", "steady", "classify", "mu-star", "compare")
PROFILE_NAMES = ("r", "gamma", "mu1", "mu2")

MODEL_KEYS = {"D": None, "nu": 0.0, "K1": 1.0, "K2": 1.0, "homogenization_radius": 50.0}
SOLVER_KEYS = {"N": 256, "dt": None, "cfl": None, "mu": 1.0, "horizon": 10.0,
               "stencil_order": 2, "advection": "hybrid"}
OUTPUT_KEYS = {"dir": "out", "formats": "ndjson,csv,png", "snapshot_every": 0.5,
               "fields": "false"}
TASK_KEYS = {
    "name": None,
    # threshold
    "p": None, "q": None, "resolution": 512,
    # steady
    "dx": 0.05, "L_sequence": None, "window": 5.0,
    # classify / mu-star
    "eps_R": 1e-3, "eps_g": 1e-6, "eps_d": 1e-6, "window_fraction": 0.1,
    "mu_lo": None, "mu_hi": None, "tol": 0.05,
    # compare
    "mus": "0.5,1,2", "workers": 1,
}
INITIAL_KEYS = ("h0", "a", "b", "table")
FORMATS = ("ndjson", "csv", "png")


@dataclass
class TaskConfig:
    name: str
    params: dict = field(default_factory=dict)
    explicit: bool = False


@dataclass
class OutputConfig:
    dir: str = "out"
    formats: tuple[str, ...] = FORMATS
    fields: bool = False


@dataclass
class RunConfig:
    profile: CoefficientProfile
    initial: InitialData
    solver: SolverConfig
    task: TaskConfig
    output: OutputConfig
    canonical: str = ""

    @property
    def run_hash(self) -> str:
        # the output directory does not change what is computed
        body = "\n".join(l for l in self.canonical.splitlines() if not l.startswith("dir = "))
        return hashlib.sha256(body.encode()).hexdigest()[:12]


def _num(problems, where, key, raw, kind=float, positive=False, nonneg=False):
    try:
        v = kind(raw) if kind is not int else int(str(raw).strip())
    except (TypeError, ValueError):
        problems.append(f"[{where}] {key}: expected {kind.__name__}, got {raw!r}")
        return None
    if kind is float and not math.isfinite(v):
        problems.append(f"[{where}] {key}: must be finite")
        return None
    if positive and not v > 0:
        problems.append(f"[{where}] {key}: must be positive, got {v}")
        return None
    if nonneg and v < 0:
        problems.append(f"[{where}] {key}: must be nonnegative, got {v}")
        return None
    return v


def _floats(raw):
    return [float(s) for s in str(raw).replace(";", ",").split(",") if s.strip()]


def _resolve(path, base):
    return path if os.path.isabs(path) or base is None else os.path.join(base, path)


def _parse_profile(sec, name, problems, base):
    where = f"profile.{name}"
    kind = sec.get("kind")
    if kind is None:
        problems.append(f"[{where}] kind: missing")
        return None, None
    kind = kind.strip()
    if kind not in KINDS:
        problems.append(f"[{where}] kind: {kind!r} not one of {KINDS}")
        return None, None
    allowed = set(_REQUIRED[kind]) | {"kind"}
    if kind == "tabulated":
        allowed |= {"file", "xs", "values"}
    for k in sec:
        if k not in allowed:
            problems.append(f"[{where}] {k}: unknown key for kind {kind}")
    params = {}
    for k in _REQUIRED[kind]:
        if k not in sec:
            problems.append(f"[{where}] {k}: missing")
            continue
        v = _num(problems, where, k, sec[k])
        if v is not None:
            params[k] = v
    canon = {"kind": kind, **{k: repr(v) for k, v in params.items()}}
    if len(params) != len(_REQUIRED[kind]):
        return None, canon
    try:
        if kind != "tabulated":
            spec = ProfileSpec(kind, params)
        elif "file" in sec and ("xs" in sec or "values" in sec):
            problems.append(f"[{where}] file: give either file or xs/values, not both")
            return None, canon
        elif "file" in sec:
            path = _resolve(sec["file"].strip(), base)
            spec = ProfileSpec.from_file(path, params["limit"])
            spec = ProfileSpec.tabulated(spec.xs, spec.values, params["limit"], sec["file"].strip())
            canon["file"] = sec["file"].strip()
        else:
            spec = ProfileSpec.tabulated(_floats(sec.get("xs", "")), _floats(sec.get("values", "")),
                                         params["limit"])
            canon["xs"] = ",".join(repr(v) for v in spec.xs)
            canon["values"] = ",".join(repr(v) for v in spec.values)
    except (InvalidProfile, OSError, ValueError) as exc:
        problems.append(f"[{where}] {exc}")
        return None, canon
    return spec, canon


def parse_config(text: str, base_dir: str | None = None) -> RunConfig:
    """Parse and validate a configuration document; raise :class:`ConfigError`."""
    cp = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    cp.optionxform = str
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError([f"syntax: {exc}"]) from None

    problems: list[str] = []
    known = {"model", "initial", "solver", "task", "output"} | {f"profile.{n}" for n in PROFILE_NAMES}
    for s in cp.sections():
        if s not in known:
            problems.append(f"[{s}]: unknown section")
    canon: dict[str, dict[str, str]] = {}

    def section(name):
        return cp[name] if cp.has_section(name) else {}

    def simple(name, keys, required=()):
        sec = section(name)
        for k in sec:
            if k not in keys:
                problems.append(f"[{name}] {k}: unknown key")
        for k in required:
            if k not in sec:
                problems.append(f"[{name}] {k}: missing")
        return sec

    # model
    msec = simple("model", MODEL_KEYS, required=("D",))
    model = {}
    for k, default in MODEL_KEYS.items():
        raw = msec.get(k, default)
        if raw is None:
            continue
        v = _num(problems, "model", k, raw, positive=(k != "nu"))
        if v is not None:
            model[k] = v
    canon["model"] = {k: repr(v) for k, v in model.items()}

    # profiles
    specs = {}
    for n in PROFILE_NAMES:
        if not cp.has_section(f"profile.{n}"):
            problems.append(f"[profile.{n}]: missing section")
            continue
        spec, c = _parse_profile(cp[f"profile.{n}"], n, problems, base_dir)
        specs[n] = spec
        if c is not None:
            canon[f"profile.{n}"] = c
    profile = None
    if len(model) == len(MODEL_KEYS) and all(specs.get(n) for n in PROFILE_NAMES):
        try:
            profile = CoefficientProfile(specs["r"], specs["gamma"], specs["mu1"], specs["mu2"],
                                         model["D"], model["nu"], model["K1"], model["K2"],
                                         model["homogenization_radius"])
        except InvalidProfile as exc:
            problems.append(f"[model] {exc}")

    # initial data
    isec = simple("initial", INITIAL_KEYS, required=("h0",))
    has_hump = "a" in isec or "b" in isec
    has_table = "table" in isec
    ican = {}
    h0 = _num(problems, "initial", "h0", isec["h0"], positive=True) if "h0" in isec else None
    initial = None
    if has_hump and has_table:
        problems.append("[initial] analytic (a, b) and tabulated (table) data are mutually exclusive")
    elif has_table:
        path = _resolve(isec["table"].strip(), base_dir)
        ican = {"table": isec["table"].strip()}
        try:
            data = np.loadtxt(path, comments="#", ndmin=2)
            if data.shape[1] != 3:
                raise ValueError("expected three columns x M0 A0")
            initial = InitialData.tabulated(data[:, 0], data[:, 1], data[:, 2])
            if h0 is not None and not np.isclose(initial.h0, h0):
                problems.append(f"[initial] table spans [-{initial.h0}, {initial.h0}] but h0={h0}")
        except (OSError, ValueError, InvalidInitialData) as exc:
            problems.append(f"[initial] table: {exc}")
    else:
        a = _num(problems, "initial", "a", isec.get("a", 0.5), positive=True)
        b = _num(problems, "initial", "b", isec.get("b", 0.5), positive=True)
        if profile is not None and a is not None and a >= profile.K1:
            problems.append(f"[initial] a: need a < K1 = {profile.K1}")
        if profile is not None and b is not None and b >= profile.K2:
            problems.append(f"[initial] b: need b < K2 = {profile.K2}")
        if None not in (h0, a, b):
            initial = InitialData.cosine(h0, a, b)
            ican = {"a": repr(a), "b": repr(b)}
    if h0 is not None:
        ican = {"h0": repr(h0), **ican}
    canon["initial"] = ican

    # output (parsed before solver: snapshot_every feeds the solver)
    osec = simple("output", OUTPUT_KEYS)
    out_dir = osec.get("dir", OUTPUT_KEYS["dir"]).strip()
    formats = tuple(s.strip() for s in osec.get("formats", OUTPUT_KEYS["formats"]).split(",") if s.strip())
    for f in formats:
        if f not in FORMATS:
            problems.append(f"[output] formats: {f!r} not one of {FORMATS}")
    every = _num(problems, "output", "snapshot_every",
                 osec.get("snapshot_every", OUTPUT_KEYS["snapshot_every"]), positive=True)
    fields_raw = osec.get("fields", OUTPUT_KEYS["fields"]).strip().lower()
    if fields_raw not in ("true", "false", "yes", "no", "1", "0"):
        problems.append(f"[output] fields: expected a boolean, got {fields_raw!r}")
    fields = fields_raw in ("true", "yes", "1")
    output = OutputConfig(out_dir, formats, fields)
    canon["output"] = {"dir": out_dir, "formats": ",".join(formats), "snapshot_every": repr(every),
                       "fields": str(fields).lower()}

    # solver
    ssec = simple("solver", SOLVER_KEYS)
    sv = {}
    solver_defaults = dict(SOLVER_KEYS)
    if "dt" not in ssec and "cfl" not in ssec:
        solver_defaults["dt"] = 0.01
    for k, default in solver_defaults.items():
        raw = ssec.get(k, default)
        if raw is None:
            continue
        if k == "advection":
            sv[k] = str(raw).strip()
        elif k in ("N", "stencil_order"):
            v = _num(problems, "solver", k, raw, kind=int, positive=True)
            if v is not None:
                sv[k] = v
        else:
            v = _num(problems, "solver", k, raw, positive=(k != "horizon"), nonneg=True)
            if v is not None:
                sv[k] = v
    if "dt" in ssec and "cfl" in ssec:
        problems.append("[solver] dt and cfl are mutually exclusive")
    solver = None
    try:
        if every is not None:
            solver = SolverConfig(output_every=every, **{k: v for k, v in sv.items()})
    except (TypeError, ValueError) as exc:
        problems.append(f"[solver] {exc}")
    canon["solver"] = {k: v if isinstance(v, str) else repr(v) for k, v in sv.items()}

    # task
    tsec = simple("task", TASK_KEYS)
    name = tsec.get("name", "simulate").strip()
    if name not in TASKS:
        problems.append(f"[task] name: {name!r} not one of {TASKS}")
    tparams = {}
    for k, default in TASK_KEYS.items():
        if k == "name":
            continue
        raw = tsec.get(k, default)
        if raw is None:
            continue
        if k in ("L_sequence", "mus"):
            try:
                tparams[k] = _floats(raw)
                if not tparams[k] or any(v <= 0 for v in tparams[k]):
                    raise ValueError
            except ValueError:
                problems.append(f"[task] {k}: expected a comma list of positive numbers")
        elif k in ("resolution", "workers"):
            v = _num(problems, "task", k, raw, kind=int, positive=True)
            if v is not None:
                tparams[k] = v
        else:
            v = _num(problems, "task", k, raw, positive=k not in ("p", "q"))
            if v is not None:
                tparams[k] = v
    if ("p" in tparams) != ("q" in tparams):
        problems.append("[task] p and q must be given together")
    elif "p" in tparams and tparams["q"] <= tparams["p"]:
        problems.append("[task] need p < q")
    if name == "mu-star" and not ("mu_lo" in tparams and "mu_hi" in tparams):
        problems.append("[task] mu-star needs mu_lo and mu_hi")
    task = TaskConfig(name, tparams, "name" in tsec)
    canon["task"] = {"name": name} if task.explicit else {}
    for k, v in tparams.items():
        canon["task"][k] = ",".join(map(repr, v)) if isinstance(v, list) else repr(v)

    if problems:
        raise ConfigError(problems)
    text_canon = _render(canon)
    return RunConfig(profile, initial, solver, task, output, text_canon)


def _render(canon: dict[str, dict[str, str]]) -> str:
    lines = []
    for sec in ("model", *(f"profile.{n}" for n in PROFILE_NAMES), "initial", "solver", "task", "output"):
        lines.append(f"[{sec}]")
        for k, v in canon.get(sec, {}).items():
            lines.append(f"{k} = {v}")
        lines.append("")
    return "\n".join(lines)


def profile_section(name: str, spec: ProfileSpec) -> str:
    """``[profile.<name>]`` block that parses back to ``spec``."""
    lines = [f"[profile.{name}]"]
    for k, v in spec.to_dict().items():
        if isinstance(v, list):
            v = ",".join(repr(float(x)) for x in v)
        elif isinstance(v, float):
            v = repr(v)
        lines.append(f"{k} = {v}")
    return "\n".join(lines) + "\n"


def serialize_config(cfg: RunConfig) -> str:
    """Canonical text; parsing it again yields an identical run."""
    return cfg.canonical


def load_config(path: str) -> RunConfig:
    with open(path) as fh:
        text = fh.read()
    return parse_config(text, base_dir=os.path.dirname(os.path.abspath(path)))
