"""Line-oriented configuration: `key = value` entries under `[section]`
headers. Parsing is strict: unknown sections or keys, duplicates, missing
required keys and type mismatches are all errors, because a silently
misconfigured verification tool defeats its purpose."""

from __future__ import annotations

from dataclasses import dataclass, field, fields as dc_fields

from .errors import ConfigError
from .grid import PhaseGrid, build_grid
from .presets import InitialData, make_profile_1d, make_profile_2d

MODES = ("evolve", "picard", "division-lemma", "convergence")


@dataclass
class GridConfig:
    x_min: float
    x_max: float
    v_min: float
    v_max: float
    nx: int
    nv: int
    t_final: float


@dataclass
class InitialDataConfig:
    f0: str = "bump2d"
    f0_x_center: float = 0.0
    f0_x_radius: float = 1.0
    f0_v_center: float = 0.5
    f0_v_radius: float = 1.0
    f0_height: float = 1.0
    a0: str = "zero"
    a0_center: float = 0.0
    a0_radius: float = 1.0
    a0_height: float = 1.0
    a1: str = "zero"
    a1_center: float = 0.0
    a1_radius: float = 1.0
    a1_height: float = 1.0


@dataclass
class TransportConfig:
    mode: str = "analytic"
    clamp: bool = False
    coupling: bool = True


@dataclass
class OutputConfig:
    directory: str = "out"
    snapshot_cadence: int = 10
    write_csv: bool = True
    write_json: bool = True
    history_cap: int = 4096


@dataclass
class TolerancesConfig:
    eps_supp: float = 1e-12
    picard_tol: float = 1e-10
    picard_max_iter: int = 50
    division_tol: float = 1e-8


@dataclass
class PicardConfig:
    t_horizon: float = 0.25


@dataclass
class Config:
    mode: str = "evolve"
    grid: GridConfig = None
    initial_data: InitialDataConfig = field(default_factory=InitialDataConfig)
    transport: TransportConfig = field(default_factory=TransportConfig)
    output: OutputConfig = field(default_factory=OutputConfig)
    tolerances: TolerancesConfig = field(default_factory=TolerancesConfig)
    picard: PicardConfig = field(default_factory=PicardConfig)

    def build_grid(self) -> PhaseGrid:
        init = self.build_initial_data()
        return build_grid(self.grid.x_min, self.grid.x_max,
                          self.grid.v_min, self.grid.v_max,
                          self.grid.nx, self.grid.nv, self.grid.t_final,
                          support_x=init.field_data_support_x(),
                          support_v=init.f0.support_v())

    def build_initial_data(self) -> InitialData:
        c = self.initial_data
        f0 = make_profile_2d(c.f0, c.f0_x_center, c.f0_x_radius,
                             c.f0_v_center, c.f0_v_radius, c.f0_height)
        a0 = make_profile_1d(c.a0, c.a0_center, c.a0_radius, c.a0_height)
        a1 = make_profile_1d(c.a1, c.a1_center, c.a1_radius, c.a1_height)
        return InitialData(f0=f0, a0=a0, a1=a1)


# section name -> (dataclass, config attribute)
_SECTIONS = {
    "grid": (GridConfig, "grid"),
    "initial_data": (InitialDataConfig, "initial_data"),
    "transport": (TransportConfig, "transport"),
    "output": (OutputConfig, "output"),
    "tolerances": (TolerancesConfig, "tolerances"),
    "picard": (PicardConfig, "picard"),
}

_REQUIRED = {"grid": ("x_min", "x_max", "v_min", "v_max", "nx", "nv",
                      "t_final")}


def parse_config(text: str) -> Config:
    """Parse configuration text into a validated Config."""
    sections: dict = {}
    top: dict = {}
    seen: dict = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#") or line.startswith(";"):
            continue
        if line.startswith("["):
            if not line.endswith("]"):
                raise ConfigError("malformed section header", lineno)
            name = line[1:-1].strip()
            if name not in _SECTIONS:
                raise ConfigError(f"unknown section [{name}]", lineno)
            current = name
            sections.setdefault(name, {})
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {line!r}", lineno)
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        where = (current, key)
        if where in seen:
            raise ConfigError(
                f"duplicate key {key!r} (first set on line {seen[where]})",
                lineno)
        seen[where] = lineno
        if current is None:
            if key != "mode":
                raise ConfigError(
                    f"unknown top-level key {key!r} (only 'mode' may appear "
                    "before the first section)", lineno)
            top["mode"] = (value, lineno)
        else:
            sections[current][key] = (value, lineno)

    cfg = Config()
    if "mode" in top:
        value, lineno = top["mode"]
        if value not in MODES:
            raise ConfigError(
                f"mode must be one of {', '.join(MODES)}; got {value!r}",
                lineno)
        cfg.mode = value

    for name, (cls, attr) in _SECTIONS.items():
        known = {f.name: f for f in dc_fields(cls)}
        raw_entries = sections.get(name, {})
        kwargs = {}
        for key, (value, lineno) in raw_entries.items():
            if key not in known:
                raise ConfigError(f"unknown key {key!r} in [{name}]", lineno)
            kwargs[key] = _coerce(known[key].type, key, value, lineno)
        for req in _REQUIRED.get(name, ()):
            if req not in kwargs:
                raise ConfigError(f"missing required key {req!r} in [{name}]")
        if name == "grid" and not raw_entries:
            continue
        setattr(cfg, attr, cls(**kwargs) if name == "grid" else
                _with_defaults(cls, kwargs))
    _validate(cfg)
    return cfg


def _with_defaults(cls, kwargs):
    obj = cls()
    for key, val in kwargs.items():
        setattr(obj, key, val)
    return obj


def _coerce(typ, key, value, lineno):
    name = typ if isinstance(typ, str) else typ.__name__
    try:
        if name == "int":
            return int(value)
        if name == "float":
            return float(value)
        if name == "bool":
            if value.lower() in ("true", "yes", "on", "1"):
                return True
            if value.lower() in ("false", "no", "off", "0"):
                return False
            raise ValueError(value)
        return value
    except ValueError:
        raise ConfigError(
            f"{key} expects a value of type {name}; got {value!r}", lineno)


def _validate(cfg: Config):
    if cfg.grid is not None:
        g = cfg.grid
        if g.nx < 2:
            raise ConfigError("nx must be >= 2")
        if g.nv < 2:
            raise ConfigError("nv must be >= 2")
        if g.x_max <= g.x_min:
            raise ConfigError("x_max must exceed x_min")
        if g.v_max <= g.v_min:
            raise ConfigError("v_max must exceed v_min")
        if g.t_final <= 0:
            raise ConfigError("t_final must be positive")
    if cfg.transport.mode not in ("analytic", "depth_one"):
        raise ConfigError("transport mode must be 'analytic' or 'depth_one'")
    if cfg.output.snapshot_cadence < 1:
        raise ConfigError("snapshot_cadence must be >= 1")
    if cfg.output.history_cap < 1:
        raise ConfigError("history_cap must be >= 1")
    for key in ("eps_supp", "picard_tol", "division_tol"):
        if getattr(cfg.tolerances, key) <= 0:
            raise ConfigError(f"{key} must be positive")
    if cfg.tolerances.picard_max_iter < 1:
        raise ConfigError("picard_max_iter must be >= 1")
    if cfg.picard.t_horizon <= 0:
        raise ConfigError("picard t_horizon must be positive")


def render_config(cfg: Config) -> str:
    """Canonical text form; parse(render(cfg)) reproduces cfg exactly."""
    lines = [f"mode = {cfg.mode}", ""]
    for name, (cls, attr) in _SECTIONS.items():
        obj = getattr(cfg, attr)
        if obj is None:
            continue
        lines.append(f"[{name}]")
        for f in dc_fields(cls):
            lines.append(f"{f.name} = {_fmt(getattr(obj, f.name))}")
        lines.append("")
    return "\n".join(lines)


def _fmt(value):
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)
