"""Service configuration: JSON config file with environment overrides."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path

from ..engine import ScoringPolicy

ENV_SEED = "TG_SEED"
ENV_SNAPSHOT = "TG_SNAPSHOT_PATH"
ENV_CORPUS = "TG_CORPUS"
ENV_HOST = "TG_HOST"
ENV_PORT = "TG_PORT"


@dataclass
class ServiceConfig:
    host: str = "127.0.0.1"
    port: int = 8000
    corpus_path: str | None = None
    seed: int | None = None
    snapshot_path: str | None = None
    cors_origins: list[str] = field(default_factory=lambda: ["*"])
    scoring: ScoringPolicy = field(default_factory=ScoringPolicy)


def load_config(
    path: str | Path | None = None, env: dict[str, str] | None = None
) -> ServiceConfig:
    """Read the optional JSON config file, then apply environment overrides."""
    env = os.environ if env is None else env
    config = ServiceConfig()
    if path is not None:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        config.host = data.get("host", config.host)
        config.port = int(data.get("port", config.port))
        config.corpus_path = data.get("corpus_path", config.corpus_path)
        if data.get("seed") is not None:
            config.seed = int(data["seed"])
        config.snapshot_path = data.get("snapshot_path", config.snapshot_path)
        config.cors_origins = list(data.get("cors_origins", config.cors_origins))
        if "scoring" in data:
            config.scoring = ScoringPolicy.from_dict(data["scoring"])
    if env.get(ENV_HOST):
        config.host = env[ENV_HOST]
    if env.get(ENV_PORT):
        config.port = int(env[ENV_PORT])
    if env.get(ENV_CORPUS):
        config.corpus_path = env[ENV_CORPUS]
    if env.get(ENV_SEED):
        config.seed = int(env[ENV_SEED])
    if env.get(ENV_SNAPSHOT):
        config.snapshot_path = env[ENV_SNAPSHOT]
    return config
