"""Experiment configuration: defaults < JSON file < environment < flags."""
from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Any, Mapping

from .dynamics import parse_dist, parse_map
from .errors import UsageError

EXPERIMENTS = ("bernoulli", "sinebox", "noise", "te", "ce", "cmi-check")
OUT_ENV = "INFOFLOW_OUT"

DEFAULT_DISTS = {"bernoulli": ["uniform"], "sinebox": ["uniform", "acip"]}


@dataclass
class ExperimentConfig:
    experiment: str = "bernoulli"
    delta_inv: int = 300
    samples: int = 10**6
    transients: int = 1000
    seed: int = 0
    x0: float = 0.5
    dist: list[str] = field(default_factory=list)
    d_range: list[int] = field(default_factory=lambda: list(range(2, 31)))
    n_range: list[int] = field(default_factory=lambda: list(range(1, 11)))
    epsilon: list[float] = field(default_factory=lambda: [0.1, 0.02])
    L_list: list[int] = field(default_factory=list)
    maps: list[str] = field(default_factory=lambda: ["bernoulli:2", "bernoulli:10", "rotation:0.37"])
    gain: int = 2
    coupling: int = 1
    trials: int = 1000
    cmi_dims: list[int] = field(default_factory=lambda: [4, 4, 4])
    out: str = "results"
    plot: bool = False
    workers: int = 1

    def dists(self) -> list[str]:
        return self.dist or DEFAULT_DISTS.get(self.experiment, ["uniform"])

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


VALID_KEYS = tuple(f.name for f in fields(ExperimentConfig))
_INT_KEYS = {"delta_inv", "samples", "transients", "seed", "gain", "coupling", "trials", "workers"}
_INT_LIST_KEYS = {"d_range", "n_range", "L_list", "cmi_dims"}
_STR_LIST_KEYS = {"dist", "maps"}


def parse_int_range(key: str, value) -> list[int]:
    """``"2..30"`` (inclusive), ``"2,3,5"``, a single int, or a JSON list."""
    if isinstance(value, (list, tuple)):
        items = list(value)
    elif isinstance(value, int) and not isinstance(value, bool):
        items = [value]
    else:
        text = str(value).strip()
        items = []
        for part in filter(None, (p.strip() for p in text.split(","))):
            if ".." in part:
                lo, _, hi = part.partition("..")
                try:
                    items.extend(range(int(lo), int(hi) + 1))
                except ValueError:
                    raise UsageError(f"{key}: malformed range {part!r}") from None
            else:
                items.append(part)
    try:
        out = [int(v) for v in items]
    except (TypeError, ValueError):
        raise UsageError(f"{key}: expected integers, got {value!r}") from None
    return out


def _parse_float_list(key: str, value) -> list[float]:
    items = value if isinstance(value, (list, tuple)) else str(value).split(",")
    try:
        return [float(v) for v in items if str(v).strip()]
    except ValueError:
        raise UsageError(f"{key}: expected numbers, got {value!r}") from None


def _coerce(key: str, value):
    if key in _INT_KEYS:
        if isinstance(value, bool):
            raise UsageError(f"{key}: expected an integer, got {value!r}")
        try:
            f = float(value)
            if f != int(f):
                raise ValueError
            return int(f)
        except (TypeError, ValueError, OverflowError):
            raise UsageError(f"{key}: expected an integer, got {value!r}") from None
    if key == "x0":
        try:
            return float(value)
        except (TypeError, ValueError):
            raise UsageError(f"x0: expected a number, got {value!r}") from None
    if key in _INT_LIST_KEYS:
        return parse_int_range(key, value)
    if key == "epsilon":
        return _parse_float_list(key, value)
    if key in _STR_LIST_KEYS:
        if isinstance(value, str):
            # gaussian:0.3,0.02 contains a comma, so dist lists split on ';'
            sep = ";" if key == "dist" else ","
            return [v.strip() for v in value.split(sep) if v.strip()]
        return [str(v) for v in value]
    if key == "plot":
        if isinstance(value, bool):
            return value
        if str(value).lower() in ("1", "true", "yes", "on"):
            return True
        if str(value).lower() in ("0", "false", "no", "off"):
            return False
        raise UsageError(f"plot: expected a boolean, got {value!r}")
    return str(value)


def _apply(values: dict[str, Any], source: Mapping[str, Any]) -> None:
    for raw_key, value in source.items():
        key = raw_key.replace("-", "_")
        if key == "L":
            key = "delta_inv"
        if key not in VALID_KEYS:
            raise UsageError(f"unknown config key {raw_key!r}; valid keys: {', '.join(VALID_KEYS)}")
        values[key] = _coerce(key, value)


def validate(cfg: ExperimentConfig) -> ExperimentConfig:
    if cfg.experiment not in EXPERIMENTS:
        raise UsageError(f"experiment must be one of {', '.join(EXPERIMENTS)}, got {cfg.experiment!r}")
    for key in ("delta_inv", "samples", "trials", "workers"):
        if getattr(cfg, key) < 1:
            raise UsageError(f"{key} must be positive")
    if cfg.transients < 0:
        raise UsageError("transients must be >= 0")
    for key in ("d_range", "n_range", "epsilon", "maps", "cmi_dims"):
        if not getattr(cfg, key):
            raise UsageError(f"{key} must be nonempty")
    if any(d < 2 for d in cfg.d_range):
        raise UsageError("d_range entries must be >= 2")
    if any(n < 1 for n in cfg.n_range):
        raise UsageError("n_range entries must be >= 1")
    if any(L < 1 for L in cfg.L_list):
        raise UsageError("L_list entries must be positive")
    if any(not (0 < e <= 1) for e in cfg.epsilon):
        raise UsageError("epsilon entries must lie in (0, 1]")
    if len(cfg.cmi_dims) != 3 or any(v < 1 for v in cfg.cmi_dims):
        raise UsageError("cmi_dims needs three positive sizes")
    if not (0.0 <= cfg.x0 < 1.0):
        raise UsageError("x0 must lie in [0, 1)")
    for d in cfg.dist:
        parse_dist(d)
    for m in cfg.maps:
        parse_map(m)
    return cfg


def parse_config(
    file: str | os.PathLike | None = None,
    flags: Mapping[str, Any] | None = None,
    env: Mapping[str, str] | None = None,
) -> ExperimentConfig:
    values: dict[str, Any] = {}
    if file is not None:
        try:
            data = json.loads(Path(file).read_text())
        except OSError as exc:
            raise UsageError(f"cannot read config file {file}: {exc}") from None
        except json.JSONDecodeError as exc:
            raise UsageError(f"config file {file} is not valid JSON: {exc}") from None
        if not isinstance(data, dict):
            raise UsageError("config file must hold a flat JSON object")
        _apply(values, data)
    env = os.environ if env is None else env
    if env.get(OUT_ENV):
        values["out"] = env[OUT_ENV]
    if flags:
        _apply(values, {k: v for k, v in flags.items() if v is not None})
    return validate(ExperimentConfig(**values))
