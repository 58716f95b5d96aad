"""Simulation configuration and its JSON form."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, fields
from pathlib import Path

from .devices import HDD_DEFAULT, SSD_DEFAULT, DeviceProfile
from .errors import ConfigError

KiB = 1 << 10
MiB = 1 << 20
GiB = 1 << 30


@dataclass
class Config:
    hdd: DeviceProfile = HDD_DEFAULT
    ssd: DeviceProfile = SSD_DEFAULT
    window_W: int = 128
    percent_list_capacity: int = 10
    default_threshold: float = 0.5
    region_bytes: int = 4 * GiB
    gate_check_interval_s: float = 1.0
    cfq_Q: int = 128
    static_high: float = 0.45
    static_low: float = 0.30
    seed: int = 0
    flush_io_bytes: int = 1 * MiB

    def validate(self) -> None:
        bad = []
        self.hdd.validate("devices.hdd")
        self.ssd.validate("devices.ssd")

        def need(name, ok):
            if not ok:
                bad.append(name)

        def is_int(v):
            return isinstance(v, int) and not isinstance(v, bool)

        def is_num(v):
            return isinstance(v, (int, float)) and not isinstance(v, bool)

        need("window_W", is_int(self.window_W) and self.window_W >= 2)
        need("percent_list_capacity", is_int(self.percent_list_capacity) and self.percent_list_capacity >= 1)
        need("default_threshold", is_num(self.default_threshold) and 0 <= self.default_threshold <= 1)
        need("region_bytes", is_int(self.region_bytes) and self.region_bytes > 0)
        need("gate_check_interval_s", is_num(self.gate_check_interval_s) and self.gate_check_interval_s >= 0)
        need("cfq_Q", is_int(self.cfq_Q) and self.cfq_Q >= 1)
        need("static_high", is_num(self.static_high) and 0 <= self.static_high <= 1)
        need("static_low", is_num(self.static_low) and 0 <= self.static_low <= 1)
        if not bad and self.static_low > self.static_high:
            bad += ["static_low", "static_high"]
        need("seed", is_int(self.seed))
        need("flush_io_bytes", is_int(self.flush_io_bytes) and self.flush_io_bytes > 0)
        if bad:
            raise ConfigError(f"invalid config values: {', '.join(bad)}")

    def to_dict(self) -> dict:
        d = {"devices": {"hdd": self.hdd.to_dict(), "ssd": self.ssd.to_dict()}}
        for f in fields(self):
            if f.name not in ("hdd", "ssd"):
                d[f.name] = getattr(self, f.name)
        return d

    @classmethod
    def from_dict(cls, doc: dict) -> "Config":
        if not isinstance(doc, dict):
            raise ConfigError("config must be a JSON object")
        scalar = {f.name for f in fields(cls)} - {"hdd", "ssd"}
        unknown = sorted(set(doc) - scalar - {"devices"})
        kwargs = {}
        devices = doc.get("devices", {})
        if not isinstance(devices, dict):
            raise ConfigError("devices must be an object")
        unknown += [f"devices.{k}" for k in sorted(set(devices) - {"hdd", "ssd"})]
        prof_keys = {f.name for f in fields(DeviceProfile)}
        for name in ("hdd", "ssd"):
            if name not in devices:
                continue
            prof = devices[name]
            if not isinstance(prof, dict):
                raise ConfigError(f"devices.{name} must be an object")
            unknown += [f"devices.{name}.{k}" for k in sorted(set(prof) - prof_keys)]
            base = asdict(HDD_DEFAULT if name == "hdd" else SSD_DEFAULT)
            base.update({k: v for k, v in prof.items() if k in prof_keys})
            kwargs[name] = DeviceProfile(**base)
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
        kwargs.update({k: doc[k] for k in scalar if k in doc})
        cfg = cls(**kwargs)
        cfg.validate()
        return cfg

    @classmethod
    def load(cls, path: str | Path) -> "Config":
        try:
            doc = json.loads(Path(path).read_text())
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: not valid JSON ({exc})") from None
        return cls.from_dict(doc)


def default_config(**overrides) -> Config:
    cfg = Config(**overrides)
    cfg.validate()
    return cfg


__all__ = ["Config", "default_config", "KiB", "MiB", "GiB"]
