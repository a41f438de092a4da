"""Per-comment score aggregation onto the 0-100 reporting scale.

Raw metric values arrive on their native scales (n-gram metrics in [0, 1],
consensus TF-IDF in [0, 10], cosines and alignment in [-1, 1]) and are
rescaled by a factor of 100 total. The three group averages then combine
into overall scores:

    overall_ss  = w_syn * syn_avg + w_sem * sem_avg
    overall_ssl = w_syn * syn_avg + w_sem * sem_avg + w_llm * llm_avg

with default weights (0.46, 0.54) and (0.30, 0.35, 0.35).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, asdict
from statistics import fmean
from typing import Any, Mapping

from ..errors import ProviderError
from ..prompts import PromptTemplate
from ..providers import AlignmentProvider, CompletionProvider, EmbeddingProvider, cosine

OMS_SS_WEIGHTS = (0.46, 0.54)
OMS_SSL_WEIGHTS = (0.30, 0.35, 0.35)


def embedding_cosine(
    provider: EmbeddingProvider, candidate_text: str, reference_text: str
) -> float:
    if not candidate_text or not reference_text:
        raise ValueError("embedding cosine needs two non-empty texts")
    return cosine(provider.embed(candidate_text), provider.embed(reference_text))


def side_score(provider: AlignmentProvider, code: str, comment: str) -> float:
    """Code-comment alignment from the provider, validated to [-1, 1]."""
    if not code or not comment:
        raise ValueError("alignment scoring needs non-empty code and comment")
    score = provider.align(code, comment)
    if not -1.0 <= score <= 1.0:
        raise ProviderError(f"alignment score {score} outside [-1, 1]")
    return score


_INT_RE = re.compile(r"-?\d+")


def llm_judge(
    provider: CompletionProvider,
    code: str,
    comment: str,
    rubric: PromptTemplate,
    temperature: float = 0.0,
) -> float:
    """Ask a judge model to rate the comment; the first integer in the
    reply is the score and must lie in [0, 100] (no clamping)."""
    prompt = "\n".join(
        [
            rubric.instruction_text,
            "",
            rubric.target_section_header,
            code,
            "",
            rubric.helper_section_header,
            comment,
            "",
            rubric.output_constraint_text,
        ]
    )
    reply = provider.complete(prompt, temperature)
    match = _INT_RE.search(reply)
    if match is None:
        raise ValueError(f"judge reply has no numeric score: {reply!r}")
    score = int(match.group())
    if not 0 <= score <= 100:
        raise ValueError(f"judge score {score} outside [0, 100]")
    return float(score)


def oms_ss(
    syn_avg: float, sem_avg: float, weights: tuple[float, float] = OMS_SS_WEIGHTS
) -> float:
    return weights[0] * syn_avg + weights[1] * sem_avg


def oms_ssl(
    syn_avg: float,
    sem_avg: float,
    llm_avg: float,
    weights: tuple[float, float, float] = OMS_SSL_WEIGHTS,
) -> float:
    return weights[0] * syn_avg + weights[1] * sem_avg + weights[2] * llm_avg


@dataclass
class ScoreCard:
    """All metric values for one generated comment, on the 0-100 scale."""

    method_id: str
    strategy: str
    bleu: float
    meteor: float
    rouge_l: float
    cider: float
    sbert_cos: float
    usenc_cos: float
    side: float
    syn_avg: float
    sem_avg: float
    oms_ss: float
    llm_scores: dict[str, float] = field(default_factory=dict)
    llm_avg: float | None = None
    oms_ssl: float | None = None
    rubric_digest: str | None = None

    def to_payload(self) -> dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_payload(cls, payload: dict[str, Any]) -> "ScoreCard":
        return cls(**payload)


def build_scorecard(
    method_id: str,
    strategy: str,
    bleu_raw: float,
    meteor_raw: float,
    rouge_l_raw: float,
    cider_raw: float,
    sbert_cos_raw: float,
    usenc_cos_raw: float,
    side_raw: float,
    llm_scores: Mapping[str, float] | None = None,
    ss_weights: tuple[float, float] = OMS_SS_WEIGHTS,
    ssl_weights: tuple[float, float, float] = OMS_SSL_WEIGHTS,
    rubric_digest: str | None = None,
) -> ScoreCard:
    """Rescale raw components, average the groups, and fill overall scores.

    Judge scores are optional; without them the LLM average and the
    three-way overall score stay absent.
    """
    card = ScoreCard(
        method_id=method_id,
        strategy=strategy,
        bleu=bleu_raw * 100.0,
        meteor=meteor_raw * 100.0,
        rouge_l=rouge_l_raw * 100.0,
        cider=cider_raw * 10.0,
        sbert_cos=sbert_cos_raw * 100.0,
        usenc_cos=usenc_cos_raw * 100.0,
        side=side_raw * 100.0,
        syn_avg=0.0,
        sem_avg=0.0,
        oms_ss=0.0,
        llm_scores=dict(llm_scores or {}),
        rubric_digest=rubric_digest,
    )
    card.syn_avg = fmean((card.bleu, card.meteor, card.rouge_l))
    card.sem_avg = fmean((card.cider, card.sbert_cos, card.usenc_cos, card.side))
    card.oms_ss = oms_ss(card.syn_avg, card.sem_avg, ss_weights)
    if card.llm_scores:
        card.llm_avg = fmean(card.llm_scores.values())
        card.oms_ssl = oms_ssl(card.syn_avg, card.sem_avg, card.llm_avg, ssl_weights)
    return card
