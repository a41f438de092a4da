"""Evaluation metrics: syntactic, semantic, LLM-judge, and overall scores."""

from .ngram import (
    TokenizedText,
    bleu4_smoothed,
    cider,
    meteor,
    rouge_l,
    tokenize,
)
from .scorecard import (
    OMS_SS_WEIGHTS,
    OMS_SSL_WEIGHTS,
    ScoreCard,
    build_scorecard,
    embedding_cosine,
    llm_judge,
    oms_ss,
    oms_ssl,
    side_score,
)

__all__ = [
    "OMS_SS_WEIGHTS",
    "OMS_SSL_WEIGHTS",
    "ScoreCard",
    "TokenizedText",
    "bleu4_smoothed",
    "build_scorecard",
    "cider",
    "embedding_cosine",
    "llm_judge",
    "meteor",
    "oms_ss",
    "oms_ssl",
    "rouge_l",
    "side_score",
    "tokenize",
]
