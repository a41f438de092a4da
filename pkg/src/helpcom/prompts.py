"""Prompt rendering under a token budget, and provider invocation.

Three strategies share one template: ``baseline`` renders the target
method alone, ``helpcom1`` adds its immediate helpers, and ``helpcomN``
adds the full helper chain. The rendered text never mentions the strategy,
so a depth-1 full chain renders byte-identically to the immediate one.

The token estimator is a deliberate upper bound, ceil(bytes / 3), rather
than any model tokenizer, so the budget check is vendor-neutral. When a
prompt would exceed the budget, helpers are dropped deepest-depth-first
(ties: last encountered first); the target body itself is never dropped.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, asdict
from datetime import datetime, timezone
from typing import Any, Callable, Mapping

from .errors import EmptyCompletionError, ProviderAuthError, ProviderError
from .extraction import MethodRecord
from .graph import FULL, HelperChain
from .providers import CompletionProvider, prompt_digest

log = logging.getLogger(__name__)

BASELINE = "baseline"
HELPCOM1 = "helpcom1"
HELPCOMN = "helpcomN"
STRATEGIES = (BASELINE, HELPCOM1, HELPCOMN)


@dataclass(frozen=True)
class PromptTemplate:
    template_id: str
    instruction_text: str
    target_section_header: str
    helper_section_header: str
    output_constraint_text: str

    def __post_init__(self) -> None:
        for name, value in asdict(self).items():
            if not value:
                raise ValueError(f"template field {name} must be non-empty")


DEFAULT_TEMPLATE = PromptTemplate(
    template_id="default-v1",
    instruction_text=(
        "You are an expert software engineer. Write a concise method-level "
        "documentation comment describing what the following method does."
    ),
    target_section_header="Method to document:",
    helper_section_header=(
        "The method calls the following helper methods, provided for context:"
    ),
    output_constraint_text="Respond with only the comment text, no code.",
)

JUDGE_RUBRIC = PromptTemplate(
    template_id="judge-v1",
    instruction_text=(
        "You are evaluating the quality of a method-level code comment. "
        "Considering accuracy, completeness, and clarity, rate how well the "
        "comment describes the method on a scale from 0 to 100."
    ),
    target_section_header="Method:",
    helper_section_header="Comment:",
    output_constraint_text="Respond with only the integer score.",
)


@dataclass(frozen=True)
class RenderedPrompt:
    text: str
    token_estimate: int
    strategy: str
    included_helpers: tuple[str, ...] = ()
    dropped_helpers: tuple[str, ...] = ()


@dataclass
class GeneratedComment:
    method_id: str
    strategy: str
    provider_model: str
    text: str
    prompt_digest: str
    temperature: float
    created_at: str | None = None

    def to_payload(self) -> dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_payload(cls, payload: dict[str, Any]) -> "GeneratedComment":
        return cls(**payload)


def estimate_tokens(text: str) -> int:
    """Deterministic upper-bound token estimate: ceil(utf8 bytes / 3)."""
    size = len(text.encode("utf-8"))
    return -(-size // 3)


def _compose(
    template: PromptTemplate,
    method: MethodRecord,
    helpers: list[MethodRecord],
) -> str:
    parts = [
        template.instruction_text,
        "",
        template.target_section_header,
        method.body_text,
    ]
    if helpers:
        parts += ["", template.helper_section_header]
        for helper in helpers:
            parts += ["", f"Helper `{helper.name}`:", helper.body_text]
    parts += ["", template.output_constraint_text]
    return "\n".join(parts)


def render_prompt(
    method: MethodRecord,
    chain: HelperChain | None,
    template: PromptTemplate,
    budget: int,
    methods_by_id: Mapping[str, MethodRecord] | None = None,
) -> RenderedPrompt:
    """Render one generation prompt, trimming helpers to fit the budget."""
    if chain is None:
        strategy = BASELINE
        entries = []
    else:
        strategy = HELPCOMN if chain.mode == FULL else HELPCOM1
        entries = list(chain.entries)
        if not entries:
            raise ValueError("helper chain is empty")
        if methods_by_id is None:
            raise ValueError("methods_by_id required to render helper bodies")

    dropped: list[str] = []
    while True:
        helpers = [methods_by_id[e.helper_id] for e in entries] if entries else []
        text = _compose(template, method, helpers)
        estimate = estimate_tokens(text)
        if estimate <= budget:
            return RenderedPrompt(
                text=text,
                token_estimate=estimate,
                strategy=strategy,
                included_helpers=tuple(e.helper_id for e in entries),
                dropped_helpers=tuple(dropped),
            )
        if not entries:
            raise ValueError(
                f"target body alone exceeds the token budget "
                f"({estimate} > {budget}) for method {method.method_id}"
            )
        deepest = max(e.depth for e in entries)
        victim_pos = max(i for i, e in enumerate(entries) if e.depth == deepest)
        dropped.append(entries.pop(victim_pos).helper_id)


def _strip_shared_prefix(lines: list[str], prefix: str) -> list[str]:
    stripped = [line.strip() for line in lines]
    if all(s.startswith(prefix) for s in stripped if s):
        return [s[len(prefix):].lstrip() if s else s for s in stripped]
    return lines


def _normalize_completion(raw: str) -> str:
    """Trim whitespace, code fences, and comment delimiters the model may
    have emitted around the comment text. Per-line markers are removed only
    when every non-empty line carries them, the signature of a comment
    block rather than of content."""
    text = raw.strip()
    if text.startswith("```"):
        lines = text.split("\n")[1:]
        if lines and lines[-1].strip().startswith("```"):
            lines = lines[:-1]
        text = "\n".join(lines).strip()
    if text.startswith("/*"):
        text = text.removeprefix("/**").removeprefix("/*")
        text = text.removesuffix("*/")
        lines = _strip_shared_prefix(text.strip().split("\n"), "*")
        text = "\n".join(lines).strip()
    lines = text.split("\n")
    for marker in ("//", "#"):
        lines = _strip_shared_prefix(lines, marker)
    return "\n".join(line.strip() for line in lines).strip()


def generate_comment(
    provider: CompletionProvider,
    prompt: RenderedPrompt,
    temperature: float,
    method_id: str,
    retries: int = 3,
    backoff_s: float = 0.5,
    sleep: Callable[[float], None] = time.sleep,
) -> GeneratedComment:
    """Call the completion provider, retrying transient transport failures
    with exponential backoff. Auth failures and empty completions are not
    retried."""
    attempts = 0
    while True:
        attempts += 1
        try:
            raw = provider.complete(prompt.text, temperature)
            break
        except ProviderAuthError:
            raise
        except ProviderError as exc:
            if attempts > retries:
                raise ProviderError(
                    f"provider failed after {attempts} attempts: {exc}"
                ) from exc
            delay = backoff_s * (2 ** (attempts - 1))
            log.warning(
                "provider attempt %d/%d failed (%s); retrying in %.1fs",
                attempts, retries + 1, exc, delay,
            )
            sleep(delay)
    if attempts > 1:
        log.info("provider succeeded after %d attempts", attempts)

    text = _normalize_completion(raw)
    if not text:
        raise EmptyCompletionError(f"empty completion for method {method_id}")
    return GeneratedComment(
        method_id=method_id,
        strategy=prompt.strategy,
        provider_model=provider.model_id,
        text=text,
        prompt_digest=prompt_digest(prompt.text),
        temperature=temperature,
        created_at=datetime.now(timezone.utc).isoformat(),
    )
