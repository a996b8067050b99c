"""Service configuration: listen address, archive location, scoring constants."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path

from .errors import InvalidInputError
from .retrieval import ScoringConfig

ENV_VAR = "IW_CONFIG"

_KNOWN_KEYS = {
    "listen", "archive_dir", "k1", "b", "boost_weight", "expansion_weight",
    "stem", "drop_stopwords", "seed",
}


@dataclass
class ServiceConfig:
    listen: str = "127.0.0.1:8765"
    archive_dir: str = "archive"
    scoring: ScoringConfig = field(default_factory=ScoringConfig)
    stem: bool = False
    drop_stopwords: bool = False
    seed: int | None = None

    @property
    def host(self) -> str:
        return self.listen.rsplit(":", 1)[0]

    @property
    def port(self) -> int:
        return int(self.listen.rsplit(":", 1)[1])


def load_config(path: str | Path | None = None) -> ServiceConfig:
    """Load config from ``path``, the IW_CONFIG env var, or defaults."""
    if path is None:
        path = os.environ.get(ENV_VAR)
    if path is None:
        return ServiceConfig()
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise InvalidInputError("config_syntax", f"config {path}: invalid JSON at line {exc.lineno}: {exc.msg}") from exc
    if not isinstance(raw, dict):
        raise InvalidInputError("config_syntax", f"config {path}: expected an object")
    unknown = set(raw) - _KNOWN_KEYS
    if unknown:
        raise InvalidInputError("config_unknown_key", f"config {path}: unknown key(s) {sorted(unknown)}")
    scoring = ScoringConfig(
        k1=float(raw.get("k1", 1.2)),
        b=float(raw.get("b", 0.75)),
        boost_weight=float(raw.get("boost_weight", 0.5)),
        expansion_weight=float(raw.get("expansion_weight", 0.3)),
    )
    return ServiceConfig(
        listen=raw.get("listen", "127.0.0.1:8765"),
        archive_dir=raw.get("archive_dir", "archive"),
        scoring=scoring,
        stem=bool(raw.get("stem", False)),
        drop_stopwords=bool(raw.get("drop_stopwords", False)),
        seed=raw.get("seed"),
    )
