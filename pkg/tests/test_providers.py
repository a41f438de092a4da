import json

import pytest

from helpcom.errors import ProviderAuthError, ProviderError
from helpcom.providers import (
    EmbeddingAlignmentProvider,
    HashEmbeddingProvider,
    HttpCompletionProvider,
    HttpEmbeddingProvider,
    MockCompletionProvider,
    cosine,
    prompt_digest,
)


class TestMockCompletionProvider:
    def test_digest_lookup(self, tmp_path):
        digest = prompt_digest("the prompt")
        path = tmp_path / "mock.json"
        path.write_text(json.dumps({"responses": {digest: "canned"}}))
        provider = MockCompletionProvider.from_file(path)
        assert provider.complete("the prompt", 0.2) == "canned"

    def test_default_template_fallback(self, tmp_path):
        path = tmp_path / "mock.json"
        path.write_text(json.dumps({"default_template": "mock for {digest}"}))
        provider = MockCompletionProvider.from_file(path)
        reply = provider.complete("anything", 0.2)
        assert reply == f"mock for {prompt_digest('anything')}"

    def test_no_match_no_default_errors(self):
        provider = MockCompletionProvider(responses={})
        with pytest.raises(ProviderError, match="no response"):
            provider.complete("x", 0.2)

    def test_bad_file_errors(self, tmp_path):
        path = tmp_path / "mock.json"
        path.write_text("{not json")
        with pytest.raises(ProviderError):
            MockCompletionProvider.from_file(path)


class TestHashEmbedding:
    def test_deterministic_and_nonzero(self):
        provider = HashEmbeddingProvider()
        v1 = provider.embed("close the stream")
        v2 = provider.embed("close the stream")
        assert v1 == v2
        assert any(x != 0 for x in v1)
        assert any(x != 0 for x in provider.embed("???"))

    def test_salt_changes_vectors(self):
        a = HashEmbeddingProvider(salt="sbert-role").embed("close the stream")
        b = HashEmbeddingProvider(salt="usenc-role").embed("close the stream")
        assert a != b

    def test_self_cosine_is_one(self):
        provider = HashEmbeddingProvider()
        v = provider.embed("identical text")
        assert cosine(v, v) == pytest.approx(1.0, abs=1e-9)


class TestAlignmentFallback:
    def test_identical_texts_align_perfectly(self):
        provider = EmbeddingAlignmentProvider(HashEmbeddingProvider())
        assert provider.align("int f() {}", "int f() {}") == pytest.approx(1.0)

    def test_range(self):
        provider = EmbeddingAlignmentProvider(HashEmbeddingProvider())
        score = provider.align("int f() { return close(); }", "closes the handle")
        assert -1.0 <= score <= 1.0


class TestHttpProviders:
    def test_completion_round_trip(self):
        seen = {}

        def transport(url, payload, headers):
            seen.update(url=url, payload=payload, headers=headers)
            return {"completion": "hi"}

        provider = HttpCompletionProvider("http://api", "model-x", transport=transport)
        assert provider.complete("prompt", 0.2) == "hi"
        assert seen["payload"] == {"model": "model-x", "prompt": "prompt", "temperature": 0.2}

    def test_missing_completion_field(self):
        provider = HttpCompletionProvider(
            "http://api", "m", transport=lambda *a: {"oops": 1}
        )
        with pytest.raises(ProviderError, match="completion"):
            provider.complete("p", 0.2)

    def test_embedding_round_trip_and_validation(self):
        provider = HttpEmbeddingProvider(
            "http://api", "m", transport=lambda *a: {"vector": [1, 2.5]}
        )
        assert provider.embed("t") == [1.0, 2.5]
        bad = HttpEmbeddingProvider("http://api", "m", transport=lambda *a: {"vector": []})
        with pytest.raises(ProviderError):
            bad.embed("t")

    def test_auth_env_missing(self, monkeypatch):
        monkeypatch.delenv("HELPCOM_TEST_KEY", raising=False)
        provider = HttpCompletionProvider(
            "http://api", "m", api_key_env="HELPCOM_TEST_KEY",
            transport=lambda *a: {"completion": "x"},
        )
        with pytest.raises(ProviderAuthError, match="HELPCOM_TEST_KEY"):
            provider.complete("p", 0.2)

    def test_auth_header_sent(self, monkeypatch):
        monkeypatch.setenv("HELPCOM_TEST_KEY", "sekrit")
        seen = {}

        def transport(url, payload, headers):
            seen.update(headers)
            return {"completion": "x"}

        provider = HttpCompletionProvider(
            "http://api", "m", api_key_env="HELPCOM_TEST_KEY", transport=transport
        )
        provider.complete("p", 0.2)
        assert seen["Authorization"] == "Bearer sekrit"


def test_cosine_zero_norm_rejected():
    with pytest.raises(ProviderError, match="zero-norm"):
        cosine([0.0, 0.0], [1.0, 0.0])
