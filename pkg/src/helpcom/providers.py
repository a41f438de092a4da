"""Pluggable completion, embedding, and alignment providers.

HTTP adapters speak a minimal JSON wire contract:

    completion: POST {"model", "prompt", "temperature"} -> {"completion"}
    embedding:  POST {"model", "text"})                 -> {"vector"}
    alignment:  POST {"model", "code", "comment"}       -> {"score"}

Offline stand-ins ship alongside: a file-backed mock completion provider
keyed by prompt digest, a deterministic hashed-token embedder, and an
embedding-cosine alignment fallback. The fallback is a rough proxy and is
not equivalent to a trained code-comment alignment model; it exists so the
pipeline runs end to end without network access.
"""

from __future__ import annotations

import hashlib
import json
import math
import os
import re
from pathlib import Path
from typing import Callable, Protocol

import requests

from .errors import ProviderAuthError, ProviderError

Transport = Callable[[str, dict, dict], dict]


def prompt_digest(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


class CompletionProvider(Protocol):
    model_id: str

    def complete(self, prompt: str, temperature: float) -> str: ...


class EmbeddingProvider(Protocol):
    model_id: str

    def embed(self, text: str) -> list[float]: ...


class AlignmentProvider(Protocol):
    model_id: str

    def align(self, code: str, comment: str) -> float: ...


def _requests_transport(url: str, payload: dict, headers: dict) -> dict:
    try:
        response = requests.post(url, json=payload, headers=headers, timeout=60)
    except requests.RequestException as exc:
        raise ProviderError(f"transport failure calling {url}: {exc}") from exc
    if response.status_code in (401, 403):
        raise ProviderAuthError(f"{url} rejected credentials ({response.status_code})")
    if response.status_code >= 400:
        raise ProviderError(f"{url} returned HTTP {response.status_code}")
    try:
        return response.json()
    except ValueError as exc:
        raise ProviderError(f"{url} returned non-JSON body") from exc


def _auth_headers(api_key_env: str) -> dict:
    if not api_key_env:
        return {}
    key = os.environ.get(api_key_env)
    if not key:
        raise ProviderAuthError(f"environment variable {api_key_env} is not set")
    return {"Authorization": f"Bearer {key}"}


class HttpCompletionProvider:
    def __init__(
        self,
        endpoint: str,
        model_id: str,
        api_key_env: str = "",
        transport: Transport = _requests_transport,
    ):
        self.endpoint = endpoint
        self.model_id = model_id
        self.api_key_env = api_key_env
        self._transport = transport

    def complete(self, prompt: str, temperature: float) -> str:
        payload = {"model": self.model_id, "prompt": prompt, "temperature": temperature}
        reply = self._transport(self.endpoint, payload, _auth_headers(self.api_key_env))
        if "completion" not in reply:
            raise ProviderError(f"{self.endpoint} reply lacks 'completion'")
        return str(reply["completion"])


class HttpEmbeddingProvider:
    def __init__(
        self,
        endpoint: str,
        model_id: str,
        api_key_env: str = "",
        transport: Transport = _requests_transport,
    ):
        self.endpoint = endpoint
        self.model_id = model_id
        self.api_key_env = api_key_env
        self._transport = transport

    def embed(self, text: str) -> list[float]:
        payload = {"model": self.model_id, "text": text}
        reply = self._transport(self.endpoint, payload, _auth_headers(self.api_key_env))
        vector = reply.get("vector")
        if not isinstance(vector, list) or not vector:
            raise ProviderError(f"{self.endpoint} reply lacks a 'vector'")
        return [float(v) for v in vector]


class HttpAlignmentProvider:
    def __init__(
        self,
        endpoint: str,
        model_id: str,
        api_key_env: str = "",
        transport: Transport = _requests_transport,
    ):
        self.endpoint = endpoint
        self.model_id = model_id
        self.api_key_env = api_key_env
        self._transport = transport

    def align(self, code: str, comment: str) -> float:
        payload = {"model": self.model_id, "code": code, "comment": comment}
        reply = self._transport(self.endpoint, payload, _auth_headers(self.api_key_env))
        if "score" not in reply:
            raise ProviderError(f"{self.endpoint} reply lacks 'score'")
        return float(reply["score"])


class MockCompletionProvider:
    """Canned completions keyed by prompt digest, for offline runs.

    The file is JSON: {"responses": {"<sha256>": "text", ...},
    "default_template": "..."}. The template may use {digest}; without a
    matching response or a template, completion fails like a dead endpoint.
    """

    model_id = "mock"

    def __init__(self, responses: dict[str, str], default_template: str | None = None):
        self.responses = responses
        self.default_template = default_template
        self.calls = 0

    @classmethod
    def from_file(cls, path: str | Path) -> "MockCompletionProvider":
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, ValueError) as exc:
            raise ProviderError(f"cannot load mock provider file {path}: {exc}") from exc
        return cls(
            responses=dict(data.get("responses") or {}),
            default_template=data.get("default_template"),
        )

    def complete(self, prompt: str, temperature: float) -> str:
        self.calls += 1
        digest = prompt_digest(prompt)
        if digest in self.responses:
            return self.responses[digest]
        if self.default_template is not None:
            return self.default_template.format(digest=digest)
        raise ProviderError(f"mock provider has no response for digest {digest}")


_TOKEN_RE = re.compile(r"[A-Za-z0-9_]+")


class HashEmbeddingProvider:
    """Deterministic bag-of-hashed-tokens embedding.

    Same text always maps to the same vector and any non-empty text has
    non-zero norm. A salt separates provider roles so two roles disagree
    on unrelated texts the way two real embedding models would.
    """

    def __init__(self, dim: int = 64, salt: str = ""):
        self.dim = dim
        self.salt = salt
        self.model_id = f"hash-embed-{dim}" + (f"-{salt}" if salt else "")

    def embed(self, text: str) -> list[float]:
        tokens = _TOKEN_RE.findall(text.lower()) or [text]
        vector = [0.0] * self.dim
        for token in tokens:
            h = hashlib.sha256(f"{self.salt}\x1f{token}".encode("utf-8")).digest()
            index = int.from_bytes(h[:4], "big") % self.dim
            sign = 1.0 if h[4] % 2 == 0 else -1.0
            vector[index] += sign
        if all(v == 0.0 for v in vector):
            vector[0] = 1.0
        return vector


def cosine(a: list[float], b: list[float]) -> float:
    dot = sum(x * y for x, y in zip(a, b))
    norm_a = math.sqrt(sum(x * x for x in a))
    norm_b = math.sqrt(sum(y * y for y in b))
    if norm_a == 0.0 or norm_b == 0.0:
        raise ProviderError("zero-norm embedding vector")
    return dot / (norm_a * norm_b)


class EmbeddingAlignmentProvider:
    """Code-comment alignment as embedding cosine. Offline fallback only;
    scores are not comparable with a trained alignment model's."""

    def __init__(self, embedder: EmbeddingProvider):
        self._embedder = embedder
        self.model_id = f"embedding-cosine({embedder.model_id})"

    def align(self, code: str, comment: str) -> float:
        return cosine(self._embedder.embed(code), self._embedder.embed(comment))
