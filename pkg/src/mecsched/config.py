"""Experiment configuration: defaults, file parsing, validation.

Config files are line oriented ``key = value`` text; blank lines and
``#`` comments are ignored.  Unknown keys are an error, as are values
outside their documented ranges.  The file key ``lambda`` maps to the
``arrival_prob`` field (``lambda`` is reserved in Python).
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from typing import Optional

from .catalog import CacheConfig, ContentCatalog
from .dynamics import SystemParams
from .errors import ConfigError
from .policy import POLICY_KINDS, PolicySpec
from .workload import WorkloadConfig

__all__ = ["ExperimentConfig", "load_config", "parse_config_text", "apply_overrides", "build_system"]

SWEEP_AXES = ("cache_m", "f_local_hz", "v_param", "rate_bps")

# config-file key -> dataclass field
_KEY_TO_FIELD = {
    "n_contents": "n_contents",
    "zipf_alpha": "zipf_alpha",
    "tau_bits": "tau_bits",
    "cache_m": "cache_m",
    "slot_seconds": "slot_seconds",
    "lambda": "arrival_prob",
    "w_cycles_per_bit": "w_cycles_per_bit",
    "f_local_hz": "f_local_hz",
    "f_mec_hz": "f_mec_hz",
    "rate_bps": "rate_bps",
    "v_param": "v_param",
    "horizon_slots": "horizon_slots",
    "k_min": "k_min",
    "k_max": "k_max",
    "policy": "policy",
    "sweep_axis": "sweep_axis",
    "sweep_values": "sweep_values",
    "seeds": "seeds",
}

_INT_KEYS = {"n_contents", "cache_m", "horizon_slots", "k_min", "k_max"}
_FLOAT_KEYS = {
    "zipf_alpha",
    "tau_bits",
    "slot_seconds",
    "lambda",
    "w_cycles_per_bit",
    "f_local_hz",
    "f_mec_hz",
    "rate_bps",
    "v_param",
}


@dataclass
class ExperimentConfig:
    """One experiment's parameters.  Defaults reproduce the reference
    operating point used throughout the test suite."""

    n_contents: int = 1000
    zipf_alpha: float = 0.8
    tau_bits: float = 5e6
    cache_m: int = 50
    slot_seconds: float = 0.2
    arrival_prob: float = 0.4
    w_cycles_per_bit: float = 1.0
    f_local_hz: float = 1e9
    f_mec_hz: float = 1e10
    rate_bps: float = 5e8
    v_param: float = 1e-6
    horizon_slots: int = 100000
    k_min: int = 40
    k_max: int = 60
    policy: str = "lyapunov"
    sweep_axis: Optional[str] = None
    sweep_values: Optional[list[float]] = None
    seeds: list[int] = field(default_factory=lambda: [0, 1, 2, 3, 4])
    warmup_frac: float = 0.1

    def validate(self) -> "ExperimentConfig":
        def bad(key, msg):
            return ConfigError(f"config key {key!r}: {msg}")

        if self.n_contents < 1:
            raise bad("n_contents", f"must be at least 1, got {self.n_contents}")
        if self.zipf_alpha < 0:
            raise bad("zipf_alpha", f"must be non-negative, got {self.zipf_alpha}")
        if not self.tau_bits > 0:
            raise bad("tau_bits", f"must be positive, got {self.tau_bits}")
        if not 0 <= self.cache_m <= self.n_contents:
            raise bad("cache_m", f"must lie in 0..n_contents, got {self.cache_m}")
        if not self.slot_seconds > 0:
            raise bad("slot_seconds", f"must be positive, got {self.slot_seconds}")
        if not 0 <= self.arrival_prob <= 1:
            raise bad("lambda", f"must lie in [0, 1], got {self.arrival_prob}")
        for key in ("w_cycles_per_bit", "f_local_hz", "f_mec_hz", "rate_bps"):
            if not getattr(self, key) > 0:
                raise bad(key, f"must be positive, got {getattr(self, key)}")
        if self.v_param < 0:
            raise bad("v_param", f"must be non-negative, got {self.v_param}")
        if self.horizon_slots < 1:
            raise bad("horizon_slots", f"must be at least 1, got {self.horizon_slots}")
        if self.k_min < 1:
            raise bad("k_min", f"must be at least 1, got {self.k_min}")
        if self.k_max < self.k_min:
            raise bad("k_max", f"must be >= k_min, got {self.k_max} < {self.k_min}")
        if self.policy not in POLICY_KINDS:
            raise bad("policy", f"must be one of {POLICY_KINDS}, got {self.policy!r}")
        if self.sweep_axis is not None:
            if self.sweep_axis not in SWEEP_AXES:
                raise bad("sweep_axis", f"must be one of {SWEEP_AXES}, got {self.sweep_axis!r}")
            if not self.sweep_values:
                raise bad("sweep_values", "must be a non-empty list when sweep_axis is set")
            for value in self.sweep_values:
                probe = dataclasses.replace(self, sweep_axis=None, sweep_values=None)
                probe = _set_axis_value(probe, self.sweep_axis, value)
                probe.validate()
        if not self.seeds:
            raise bad("seeds", "must be a non-empty list of integers")
        if not 0 <= self.warmup_frac < 1:
            raise bad("warmup_frac", f"must lie in [0, 1), got {self.warmup_frac}")
        return self


def _set_axis_value(config: ExperimentConfig, axis: str, value: float) -> ExperimentConfig:
    if axis == "cache_m":
        if value != int(value):
            raise ConfigError(f"config key 'sweep_values': cache_m values must be integers, got {value}")
        return dataclasses.replace(config, cache_m=int(value))
    return dataclasses.replace(config, **{axis: value})


def sweep_configs(config: ExperimentConfig) -> list[tuple[float, ExperimentConfig]]:
    """Expand a sweep config into (axis value, point config) pairs."""
    if config.sweep_axis is None:
        raise ConfigError("sweep requested but config sets no sweep_axis")
    base = dataclasses.replace(config, sweep_axis=None, sweep_values=None)
    return [(v, _set_axis_value(base, config.sweep_axis, v)) for v in config.sweep_values]


def _parse_scalar(key: str, raw: str):
    try:
        if key in _INT_KEYS:
            # accept 1e5-style integers
            as_float = float(raw)
            as_int = int(as_float)
            if as_int != as_float:
                raise ValueError
            return as_int
        if key in _FLOAT_KEYS:
            return float(raw)
    except ValueError:
        kind = "an integer" if key in _INT_KEYS else "a number"
        raise ConfigError(f"config key {key!r}: expected {kind}, got {raw!r}") from None
    return raw


def _parse_value(key: str, raw: str):
    if key == "seeds":
        try:
            return [int(part) for part in raw.split(",") if part.strip()]
        except ValueError:
            raise ConfigError(f"config key 'seeds': expected comma-separated integers, got {raw!r}") from None
    if key == "sweep_values":
        try:
            return [float(part) for part in raw.split(",") if part.strip()]
        except ValueError:
            raise ConfigError(
                f"config key 'sweep_values': expected comma-separated numbers, got {raw!r}"
            ) from None
    if key in ("policy", "sweep_axis"):
        return raw
    return _parse_scalar(key, raw)


def parse_config_text(text: str, source: str = "<config>") -> ExperimentConfig:
    """Parse ``key = value`` lines into a validated config."""
    config = ExperimentConfig()
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', got {line.rstrip()!r}")
        key, raw = (part.strip() for part in stripped.split("=", 1))
        if key not in _KEY_TO_FIELD:
            raise ConfigError(f"{source}:{lineno}: unknown config key {key!r}")
        setattr(config, _KEY_TO_FIELD[key], _parse_value(key, raw))
    return config.validate()


def load_config(path) -> ExperimentConfig:
    """Read and validate a config file; missing keys keep their defaults."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    return parse_config_text(text, source=str(path))


def apply_overrides(config: ExperimentConfig, overrides: list[str]) -> ExperimentConfig:
    """Apply ``key=value`` strings (the --set flag) on top of a config."""
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"override {item!r}: expected key=value")
        key, raw = (part.strip() for part in item.split("=", 1))
        if key not in _KEY_TO_FIELD:
            raise ConfigError(f"override {item!r}: unknown config key {key!r}")
        setattr(config, _KEY_TO_FIELD[key], _parse_value(key, raw))
    return config.validate()


def build_system(config: ExperimentConfig):
    """Materialise the simulator objects a config describes.

    Returns ``(catalog, cache, params, workload_cfg, policy)``.
    """
    catalog = ContentCatalog.zipf(config.n_contents, config.zipf_alpha, config.tau_bits)
    cache = CacheConfig.for_catalog(catalog, config.cache_m)
    params = SystemParams(
        slot_seconds=config.slot_seconds,
        cycles_per_bit=config.w_cycles_per_bit,
        f_local_hz=config.f_local_hz,
        f_mec_hz=config.f_mec_hz,
        rate_bps=config.rate_bps,
    )
    workload_cfg = WorkloadConfig(
        arrival_prob=config.arrival_prob,
        k_min=config.k_min,
        k_max=config.k_max,
        seed=config.seeds[0],
    )
    policy = PolicySpec(kind=config.policy, v_param=config.v_param)
    return catalog, cache, params, workload_cfg, policy
