"""Pipeline configuration and source-file discovery.

The config is one YAML file. Nested keys (dotted here for reference):

    repos[].name / root / branch / language / extensions / exclude
    criteria.min_stars / min_commits / min_contributors / require_active_prs
    provider.completion.endpoint / model / api_key_env
    provider.embedding.endpoint / model / api_key_env
    provider.embedding_alt.endpoint / model / api_key_env
    provider.alignment.endpoint / model / api_key_env
    provider.judge.endpoint / models / api_key_env
    generation.temperature / context_token_budget / retries
    eval.side_threshold
    eval.weights.syn_ss / sem_ss / syn_ssl / sem_ssl / llm_ssl
    storage.root

Every key has a default, so an empty file is a valid config. Repository
inclusion criteria are recorded in run manifests but never enforced here;
repository selection happens on external platforms.
"""

from __future__ import annotations

import fnmatch
import hashlib
import os
from dataclasses import dataclass, field
from pathlib import Path

import yaml

from .errors import ConfigError
from .extraction import GRAMMAR_PROFILES, SourceFileRef

_WEIGHT_TOL = 1e-9


@dataclass(frozen=True)
class RepoDescriptor:
    name: str
    root_path: Path
    branch: str = "main"
    language: str = "java"
    extensions: tuple[str, ...] = ()
    exclude: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if not self.name:
            raise ConfigError("repository name must be non-empty")
        if not self.root_path.is_dir():
            raise ConfigError(f"repository root is not a directory: {self.root_path}")

    def source_extensions(self) -> tuple[str, ...]:
        if self.extensions:
            return self.extensions
        profile = GRAMMAR_PROFILES.get(self.language)
        if profile is None:
            raise ConfigError(
                f"unknown language {self.language!r} for repo {self.name!r} "
                "and no extensions override configured"
            )
        return profile.extensions


@dataclass(frozen=True)
class RepoCriteria:
    min_stars: int = 0
    min_commits: int = 0
    min_contributors: int = 0
    require_active_prs: bool = False

    def __post_init__(self) -> None:
        for name in ("min_stars", "min_commits", "min_contributors"):
            if getattr(self, name) < 0:
                raise ConfigError(f"criteria.{name} must be non-negative")


@dataclass(frozen=True)
class MetricWeights:
    syn_ss: float = 0.46
    sem_ss: float = 0.54
    syn_ssl: float = 0.30
    sem_ssl: float = 0.35
    llm_ssl: float = 0.35

    def __post_init__(self) -> None:
        if abs(self.syn_ss + self.sem_ss - 1.0) > _WEIGHT_TOL:
            raise ConfigError(
                f"eval.weights syn_ss+sem_ss must sum to 1.0, got "
                f"{self.syn_ss + self.sem_ss!r}"
            )
        total = self.syn_ssl + self.sem_ssl + self.llm_ssl
        if abs(total - 1.0) > _WEIGHT_TOL:
            raise ConfigError(
                f"eval.weights syn_ssl+sem_ssl+llm_ssl must sum to 1.0, got {total!r}"
            )


@dataclass(frozen=True)
class ProviderEndpoint:
    endpoint: str = ""
    model: str = ""
    api_key_env: str = ""

    def api_key(self) -> str | None:
        return os.environ.get(self.api_key_env) if self.api_key_env else None


@dataclass(frozen=True)
class PipelineConfig:
    repos: tuple[RepoDescriptor, ...] = ()
    criteria: RepoCriteria = field(default_factory=RepoCriteria)
    completion: ProviderEndpoint = field(default_factory=ProviderEndpoint)
    embedding: ProviderEndpoint = field(default_factory=ProviderEndpoint)
    embedding_alt: ProviderEndpoint = field(default_factory=ProviderEndpoint)
    alignment: ProviderEndpoint = field(default_factory=ProviderEndpoint)
    judge_endpoint: str = ""
    judge_models: tuple[str, ...] = ()
    judge_api_key_env: str = ""
    temperature: float = 0.2
    context_token_budget: int = 128000
    retries: int = 3
    side_threshold: float = 0.8
    weights: MetricWeights = field(default_factory=MetricWeights)
    storage_root: Path = Path(".")

    def __post_init__(self) -> None:
        if not 0.0 <= self.temperature <= 1.0:
            raise ConfigError("generation.temperature must lie in [0, 1]")
        if self.context_token_budget <= 0:
            raise ConfigError("generation.context_token_budget must be > 0")
        if not -1.0 <= self.side_threshold <= 1.0:
            raise ConfigError("eval.side_threshold must lie in [-1, 1]")

    def repo(self, name: str) -> RepoDescriptor:
        for repo in self.repos:
            if repo.name == name:
                return repo
        raise ConfigError(f"no repository named {name!r} in config")

    def run_dir(self, run_id: str) -> Path:
        return self.storage_root / run_id


def _section(data: dict, key: str) -> dict:
    value = data.get(key) or {}
    if not isinstance(value, dict):
        raise ConfigError(f"config key {key!r} must be a mapping")
    return value


def _endpoint(section: dict) -> ProviderEndpoint:
    return ProviderEndpoint(
        endpoint=str(section.get("endpoint", "") or ""),
        model=str(section.get("model", "") or ""),
        api_key_env=str(section.get("api_key_env", "") or ""),
    )


def load_config(path: str | Path) -> PipelineConfig:
    """Parse a config file, filling documented defaults for omitted keys."""
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    try:
        data = yaml.safe_load(path.read_text(encoding="utf-8"))
    except yaml.YAMLError as exc:
        raise ConfigError(f"config file {path} is not valid YAML: {exc}") from exc
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigError(f"config file {path} must contain a mapping")

    repos = []
    for entry in data.get("repos") or []:
        if not isinstance(entry, dict):
            raise ConfigError("each repos[] entry must be a mapping")
        repos.append(
            RepoDescriptor(
                name=str(entry.get("name", "")),
                root_path=Path(entry.get("root", "")),
                branch=str(entry.get("branch", "main")),
                language=str(entry.get("language", "java")),
                extensions=tuple(entry.get("extensions") or ()),
                exclude=tuple(entry.get("exclude") or ()),
            )
        )

    criteria_raw = _section(data, "criteria")
    criteria = RepoCriteria(
        min_stars=int(criteria_raw.get("min_stars", 0)),
        min_commits=int(criteria_raw.get("min_commits", 0)),
        min_contributors=int(criteria_raw.get("min_contributors", 0)),
        require_active_prs=bool(criteria_raw.get("require_active_prs", False)),
    )

    provider = _section(data, "provider")
    judge_raw = _section(provider, "judge")
    generation = _section(data, "generation")
    eval_raw = _section(data, "eval")
    weights_raw = _section(eval_raw, "weights")
    storage = _section(data, "storage")

    try:
        weights = MetricWeights(
            syn_ss=float(weights_raw.get("syn_ss", 0.46)),
            sem_ss=float(weights_raw.get("sem_ss", 0.54)),
            syn_ssl=float(weights_raw.get("syn_ssl", 0.30)),
            sem_ssl=float(weights_raw.get("sem_ssl", 0.35)),
            llm_ssl=float(weights_raw.get("llm_ssl", 0.35)),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid eval.weights value: {exc}") from exc

    return PipelineConfig(
        repos=tuple(repos),
        criteria=criteria,
        completion=_endpoint(_section(provider, "completion")),
        embedding=_endpoint(_section(provider, "embedding")),
        embedding_alt=_endpoint(_section(provider, "embedding_alt")),
        alignment=_endpoint(_section(provider, "alignment")),
        judge_endpoint=str(judge_raw.get("endpoint", "") or ""),
        judge_models=tuple(judge_raw.get("models") or ()),
        judge_api_key_env=str(judge_raw.get("api_key_env", "") or ""),
        temperature=float(generation.get("temperature", 0.2)),
        context_token_budget=int(generation.get("context_token_budget", 128000)),
        retries=int(generation.get("retries", 3)),
        side_threshold=float(eval_raw.get("side_threshold", 0.8)),
        weights=weights,
        storage_root=Path(storage.get("root", ".")),
    )


def config_digest(path: str | Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def discover_source_files(repo: RepoDescriptor) -> list[SourceFileRef]:
    """All files under the repo root whose extension matches the language
    profile, as refs hashed at discovery time, ordered by relative path.

    Symbolic links are never followed and any path resolving outside the
    root is rejected, so the listing is deterministic for an unchanged tree.
    """
    extensions = repo.source_extensions()
    root = repo.root_path
    if not os.access(root, os.R_OK):
        raise ConfigError(f"repository root not readable: {root}")

    refs = []
    for dirpath, dirnames, filenames in os.walk(root, followlinks=False):
        dirnames.sort()
        dirnames[:] = [d for d in dirnames if not (Path(dirpath) / d).is_symlink()]
        for filename in sorted(filenames):
            full = Path(dirpath) / filename
            if full.suffix not in extensions or full.is_symlink():
                continue
            rel = full.relative_to(root).as_posix()
            if any(fnmatch.fnmatch(rel, pattern) for pattern in repo.exclude):
                continue
            if not full.resolve().is_relative_to(root.resolve()):
                continue
            digest = hashlib.sha256(full.read_bytes()).hexdigest()
            refs.append(SourceFileRef(repo=repo.name, path=rel, content_hash=digest))
    refs.sort(key=lambda r: r.path)
    return refs
