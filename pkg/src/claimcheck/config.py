"""Configuration loading and wiring of providers, backends, and the pipeline.

Config is a single JSON file; relative paths inside it resolve against the
config file's own directory. API keys are never stored in config, only the
names of environment variables that hold them.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .credibility import CredibilityRegistry
from .gbdt import GbdtModel
from .llm import LiveHttpProvider, LlmGateway, ProviderTranscript, ReplayProvider
from .pipeline import PipelineConfig
from .retrieval import (
    FilterPolicy,
    FixtureCorpusBackend,
    ReplaySearchBackend,
    SearchBackend,
    WebApiBackend,
)
from .verification import VerifierConfig


@dataclass
class AppConfig:
    """Parsed config document plus its base directory for path resolution."""

    raw: dict[str, Any]
    base_dir: Path = field(default_factory=Path.cwd)

    @classmethod
    def load(cls, path: str | Path) -> "AppConfig":
        path = Path(path)
        return cls(raw=json.loads(path.read_text(encoding="utf-8")), base_dir=path.parent)

    def resolve(self, value: str) -> Path:
        p = Path(value)
        return p if p.is_absolute() else self.base_dir / p

    @property
    def data_dir(self) -> Path:
        return self.resolve(self.raw.get("data_dir", "data"))

    @property
    def workers(self) -> int:
        return int(self.raw.get("service", {}).get("workers", 4))

    def build_gateway(self) -> LlmGateway:
        cfg = self.raw.get("provider", {})
        kind = cfg.get("kind", "replay")
        if kind == "replay":
            transcript = ProviderTranscript.load(self.resolve(cfg["transcript"]))
            provider = ReplayProvider(transcript)
        elif kind == "live":
            provider = LiveHttpProvider(
                endpoint=cfg["endpoint"],
                model=cfg["model"],
                api_key_env=cfg.get("api_key_env", "CLAIMCHECK_API_KEY"),
            )
        else:
            raise ValueError(f"unknown provider kind: {kind!r}")
        return LlmGateway(
            provider,
            max_in_flight=int(cfg.get("max_in_flight", 4)),
            max_retries=int(cfg.get("max_retries", 3)),
            rate_limit_per_s=float(cfg.get("rate_limit_per_s", 0.0)),
        )

    def build_backends(self) -> list[SearchBackend]:
        backends: list[SearchBackend] = []
        for cfg in self.raw.get("backends", []):
            kind = cfg.get("kind", "fixture_corpus")
            if kind == "fixture_corpus":
                backends.append(
                    FixtureCorpusBackend(
                        self.resolve(cfg["corpus_path"]), name=cfg.get("name", "fixture")
                    )
                )
            elif kind == "replay":
                backends.append(
                    ReplaySearchBackend(
                        self.resolve(cfg["transcript_path"]), name=cfg.get("name", "web")
                    )
                )
            elif kind == "web_api":
                backends.append(
                    WebApiBackend(
                        endpoint=cfg["endpoint"],
                        name=cfg.get("name", "web"),
                        query_param=cfg.get("query_param", "q"),
                        key_param=cfg.get("key_param", "key"),
                        api_key_env=cfg.get("api_key_env", ""),
                        extra_params=cfg.get("extra_params"),
                    )
                )
            else:
                raise ValueError(f"unknown backend kind: {kind!r}")
        if not backends:
            raise ValueError("config has no search backends")
        return backends

    def build_registry(self) -> CredibilityRegistry:
        cfg = self.raw.get("registry", {})
        default_tier = int(cfg.get("default_tier", 3))
        if "path" in cfg:
            return CredibilityRegistry.load_tsv(self.resolve(cfg["path"]), default_tier=default_tier)
        entries = {domain: int(tier) for domain, tier in cfg.get("entries", {}).items()}
        return CredibilityRegistry(entries=entries, default_tier=default_tier)

    def build_policy(self) -> FilterPolicy:
        cfg = self.raw.get("policy", {})
        kwargs: dict[str, Any] = {}
        if "blocked_domains" in cfg:
            kwargs["blocked_domains"] = frozenset(cfg["blocked_domains"])
        if "blocked_url_substrings" in cfg:
            kwargs["blocked_url_substrings"] = frozenset(cfg["blocked_url_substrings"])
        if "max_results_per_query" in cfg:
            kwargs["max_results_per_query"] = int(cfg["max_results_per_query"])
        return FilterPolicy(**kwargs)

    def build_pipeline_config(self, mode: str | None = None) -> PipelineConfig:
        agg = self.raw.get("aggregation", {})
        ver = self.raw.get("verification", {})
        model = None
        if agg.get("model_path"):
            model = GbdtModel.load(self.resolve(agg["model_path"]))
        tier_weights = None
        if "tier_weights" in agg:
            tier_weights = {int(t): float(w) for t, w in agg["tier_weights"].items()}
        return PipelineConfig(
            mode=mode or agg.get("mode", "main"),
            policy=self.build_policy(),
            min_relevant=int(self.raw.get("retrieval", {}).get("min_relevant", 8)),
            verifier=VerifierConfig(
                prescreen=bool(ver.get("prescreen", False)),
                token_budget=int(ver.get("token_budget", 3000)),
                max_reasks=int(ver.get("max_reasks", 2)),
                fan_out=int(ver.get("fan_out", 8)),
            ),
            aggregator=agg.get("aggregator", "rule"),
            tier_weights=tier_weights,
            model=model,
        )
