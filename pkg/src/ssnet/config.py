"""Pipeline configuration: a YAML/JSON file, environment overrides, then flags."""

from __future__ import annotations

import os
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Mapping

import yaml

from .analyze.compare import ATTRIBUTE_MODES
from .build import BotFilterConfig, SsnConfig

ENV_PREFIX = "SSNET_"


class ConfigError(ValueError):
    pass


@dataclass
class PipelineConfig:
    mentions: Path | None = None
    metadata: Path | None = None
    citations: Path | None = None
    out: Path | None = None
    ssn: SsnConfig = field(default_factory=SsnConfig)
    bot_filter: BotFilterConfig = field(default_factory=BotFilterConfig)
    resolutions: list[float] = field(default_factory=lambda: [0.5, 1.0, 2.0])
    attributes: list[str] = field(default_factory=lambda: ["category", "subcategory"])
    relation: str = "ssn"
    weighted_centrality: bool = False
    seed: int = 0
    jobs: int = 1

    def validate(self) -> None:
        if not self.resolutions:
            raise ConfigError("resolutions must be non-empty")
        if any(r <= 0 for r in self.resolutions):
            raise ConfigError("resolutions must be positive")
        bad = [a for a in self.attributes if a not in ATTRIBUTE_MODES]
        if bad:
            raise ConfigError(f"unknown attribute modes {bad}; expected {list(ATTRIBUTE_MODES)}")
        if self.jobs < 1:
            raise ConfigError("jobs must be >= 1")

    def describe(self) -> dict[str, Any]:
        """JSON-friendly view for the run manifest (output location excluded)."""
        return {
            "mentions": str(self.mentions) if self.mentions else None,
            "metadata": str(self.metadata) if self.metadata else None,
            "citations": str(self.citations) if self.citations else None,
            "ssn": asdict(self.ssn),
            "bot_filter": asdict(self.bot_filter),
            "resolutions": sorted(self.resolutions),
            "attributes": list(self.attributes),
            "relation": self.relation,
            "weighted_centrality": self.weighted_centrality,
            "seed": self.seed,
        }


def _sub(cls, data: Mapping | None, where: str):
    if data is None:
        return cls()
    known = {f.name for f in fields(cls)}
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"{where}: unknown keys {sorted(unknown)}")
    try:
        return cls(**data)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{where}: {exc}") from exc


def from_mapping(data: Mapping, base_dir: Path | None = None) -> PipelineConfig:
    data = dict(data)
    known = {f.name for f in fields(PipelineConfig)}
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"unknown config keys {sorted(unknown)}")

    def path(key):
        v = data.get(key)
        if v is None:
            return None
        p = Path(v)
        return p if p.is_absolute() or base_dir is None else base_dir / p

    cfg = PipelineConfig(
        mentions=path("mentions"),
        metadata=path("metadata"),
        citations=path("citations"),
        out=path("out"),
        ssn=_sub(SsnConfig, data.get("ssn"), "ssn"),
        bot_filter=_sub(BotFilterConfig, data.get("bot_filter"), "bot_filter"),
    )
    for key in ("resolutions", "attributes"):
        if key in data:
            setattr(cfg, key, list(data[key]))
    cfg.resolutions = [float(r) for r in cfg.resolutions]
    for key, conv in (("relation", str), ("weighted_centrality", bool), ("seed", int), ("jobs", int)):
        if key in data:
            setattr(cfg, key, conv(data[key]))
    return cfg


def load_config(path: str | Path | None) -> PipelineConfig:
    if path is None:
        return PipelineConfig()
    p = Path(path)
    try:
        data = yaml.safe_load(p.read_text()) or {}
    except OSError as exc:
        raise ConfigError(f"cannot read config {p}: {exc}") from exc
    except yaml.YAMLError as exc:
        raise ConfigError(f"{p}: invalid YAML/JSON ({exc})") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"{p}: top level must be a mapping")
    return from_mapping(data, p.parent)


def apply_overrides(cfg: PipelineConfig, overrides: Mapping[str, Any]) -> PipelineConfig:
    """Apply flat overrides; ``None`` values are ignored."""
    try:
        return _apply(cfg, {k: v for k, v in overrides.items() if v is not None})
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"bad override value: {exc}") from exc


def _apply(cfg: PipelineConfig, o: dict[str, Any]) -> PipelineConfig:
    if "time_window" in o:
        cfg.ssn = replace(cfg.ssn, time_window=float(o.pop("time_window")))
    for key in ("mentions", "metadata", "citations", "out"):
        if key in o:
            setattr(cfg, key, Path(o.pop(key)))
    if "resolutions" in o:
        cfg.resolutions = [float(r) for r in o.pop("resolutions")]
    for key, conv in (("seed", int), ("jobs", int), ("relation", str)):
        if key in o:
            setattr(cfg, key, conv(o.pop(key)))
    if o:
        raise ConfigError(f"unsupported overrides {sorted(o)}")
    return cfg


def env_overrides(environ: Mapping[str, str] | None = None) -> dict[str, Any]:
    """Read ``SSNET_*`` variables: SEED, JOBS, OUT, RELATION, TIME_WINDOW,
    RESOLUTIONS (comma-separated), MENTIONS, METADATA, CITATIONS."""
    env = os.environ if environ is None else environ
    out: dict[str, Any] = {}
    for key in ("seed", "jobs", "out", "relation", "time_window", "mentions", "metadata", "citations"):
        v = env.get(ENV_PREFIX + key.upper())
        if v:
            out[key] = v
    res = env.get(ENV_PREFIX + "RESOLUTIONS")
    if res:
        out["resolutions"] = [x for x in res.split(",") if x.strip()]
    return out
