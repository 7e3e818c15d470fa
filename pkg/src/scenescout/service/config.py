"""Service configuration: YAML file plus SCENESCOUT_* environment overrides.

Environment variables override file values; the variable name is the
upper-cased field name with the SCENESCOUT_ prefix (SCENESCOUT_PROVIDER_MODE,
SCENESCOUT_BUNDLE_DIR, ...). All numeric settings are validated against the
bounds their owning modules state.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, fields
from pathlib import Path

import yaml

from ..errors import ConfigError

ENV_PREFIX = "SCENESCOUT_"


@dataclass
class ServiceConfig:
    provider_mode: str = "fixture"
    bundle_dir: str = ""
    maps_base_url: str = ""
    maps_api_key: str = ""
    mllm_base_url: str = ""
    mllm_api_key: str = ""
    model_id: str = "gpt-4o"
    min_interval_m: float = 30.0
    max_interval_m: float = 40.0
    snap_radius_m: float = 25.0
    places_radius_m: float = 100.0
    step_budget: int = 200
    cache_budget_bytes: int = 64 * 1024 * 1024
    call_timeout_s: float = 60.0
    max_retries: int = 2
    rate_limit_per_s: float = 5.0
    rate_limit_burst: float = 10.0
    listen_host: str = "127.0.0.1"
    listen_port: int = 8600
    data_dir: str = "./data"
    static_dir: str = ""
    api_token: str = ""

    def validate(self) -> "ServiceConfig":
        if self.provider_mode not in ("fixture", "live"):
            raise ConfigError(f"provider_mode must be fixture or live, got {self.provider_mode!r}")
        if self.provider_mode == "fixture" and not self.bundle_dir:
            raise ConfigError("fixture mode requires bundle_dir")
        if self.provider_mode == "live":
            missing = [
                name
                for name, value in (
                    ("maps_base_url", self.maps_base_url),
                    ("maps_api_key", self.maps_api_key),
                    ("mllm_base_url", self.mllm_base_url),
                    ("mllm_api_key", self.mllm_api_key),
                )
                if not value
            ]
            if missing:
                raise ConfigError(f"live mode requires credentials: missing {', '.join(missing)}")
        if not 0 < self.min_interval_m <= self.max_interval_m:
            raise ConfigError("need 0 < min_interval_m <= max_interval_m")
        if self.snap_radius_m <= 0:
            raise ConfigError("snap_radius_m must be positive")
        if not 0 < self.places_radius_m <= 500:
            raise ConfigError("places_radius_m must be in (0, 500]")
        if self.step_budget <= 0:
            raise ConfigError("step_budget must be positive")
        if self.call_timeout_s <= 0:
            raise ConfigError("call_timeout_s must be positive")
        if self.max_retries < 0:
            raise ConfigError("max_retries must be >= 0")
        return self

    @classmethod
    def load(cls, path: str | Path | None = None, *, env: dict[str, str] | None = None) -> "ServiceConfig":
        env = os.environ if env is None else env
        values: dict = {}
        if path is not None:
            file_path = Path(path)
            if not file_path.is_file():
                raise ConfigError(f"config file {file_path} not found")
            loaded = yaml.safe_load(file_path.read_text(encoding="utf-8")) or {}
            if not isinstance(loaded, dict):
                raise ConfigError("config file must hold a mapping")
            values.update(loaded)
        config = cls()
        for f in fields(cls):
            raw = env.get(ENV_PREFIX + f.name.upper())
            if raw is None and f.name in values:
                raw = values[f.name]
            if raw is None:
                continue
            try:
                if f.type in ("float", float):
                    setattr(config, f.name, float(raw))
                elif f.type in ("int", int):
                    setattr(config, f.name, int(raw))
                else:
                    setattr(config, f.name, str(raw))
            except (TypeError, ValueError) as err:
                raise ConfigError(f"bad value for {f.name}: {raw!r}") from err
        return config.validate()
