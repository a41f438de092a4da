"""Reference-based text similarity metrics over a shared tokenizer.

All metrics in this module consume the same tokenization so their scores
are comparable. Raw scores live on the conventional scales (BLEU, ROUGE-L,
METEOR in [0, 1]; consensus TF-IDF similarity in [0, 10]); rescaling to the
0-100 reporting scale happens in the scorecard layer.
"""

from __future__ import annotations

import math
import string
from collections import Counter
from dataclasses import dataclass, field

from .porter import stem

_PUNCT = string.punctuation


@dataclass(frozen=True)
class TokenizedText:
    """Lowercased, punctuation-stripped, whitespace-delimited tokens."""

    tokens: tuple[str, ...]

    def __len__(self) -> int:
        return len(self.tokens)

    def __bool__(self) -> bool:
        return bool(self.tokens)


def tokenize(text: str) -> TokenizedText:
    """Lowercase, split on whitespace, strip edge punctuation per token.

    Tokens that are entirely punctuation are dropped. Interior punctuation
    (hyphens, apostrophes) is preserved.
    """
    tokens = []
    for raw in text.lower().split():
        tok = raw.strip(_PUNCT)
        if tok:
            tokens.append(tok)
    return TokenizedText(tuple(tokens))


def _ngrams(tokens: tuple[str, ...], n: int) -> Counter:
    return Counter(tokens[i : i + n] for i in range(len(tokens) - n + 1))


def bleu4_smoothed(candidate: TokenizedText, reference: TokenizedText) -> float:
    """Smoothed sentence-level BLEU-4.

    Geometric mean of modified n-gram precisions for n = 1..4 times the
    brevity penalty exp(min(0, 1 - |ref| / |cand|)). Smoothing: for n >= 2,
    a precision whose raw match count is zero gets one added to both its
    numerator and denominator; orders for which the candidate is shorter
    than n tokens are skipped from the geometric mean entirely.

    Raises ValueError on an empty reference; an empty candidate scores 0.
    """
    if not reference:
        raise ValueError("reference must be non-empty")
    if not candidate:
        return 0.0

    log_sum = 0.0
    terms = 0
    for n in range(1, 5):
        if len(candidate) < n:
            continue
        cand_counts = _ngrams(candidate.tokens, n)
        ref_counts = _ngrams(reference.tokens, n)
        matched = sum(min(c, ref_counts[g]) for g, c in cand_counts.items())
        total = sum(cand_counts.values())
        if matched == 0:
            if n == 1:
                return 0.0
            matched, total = 1, total + 1
        log_sum += math.log(matched / total)
        terms += 1

    precision = math.exp(log_sum / terms)
    brevity = math.exp(min(0.0, 1.0 - len(reference) / len(candidate)))
    return precision * brevity


def _lcs_length(a: tuple[str, ...], b: tuple[str, ...]) -> int:
    # single-row DP over the shorter sequence
    if len(b) > len(a):
        a, b = b, a
    row = [0] * (len(b) + 1)
    for x in a:
        prev = 0
        for j, y in enumerate(b, start=1):
            cur = row[j]
            row[j] = prev + 1 if x == y else max(row[j], row[j - 1])
            prev = cur
    return row[len(b)]


def rouge_l(candidate: TokenizedText, reference: TokenizedText) -> float:
    """Longest-common-subsequence F1.

    P = LCS/|cand|, R = LCS/|ref|, F1 = 2PR/(P+R); 0 when there is no
    common subsequence or the candidate is empty.
    """
    if not reference:
        raise ValueError("reference must be non-empty")
    if not candidate:
        return 0.0
    lcs = _lcs_length(candidate.tokens, reference.tokens)
    if lcs == 0:
        return 0.0
    p = lcs / len(candidate)
    r = lcs / len(reference)
    return 2 * p * r / (p + r)


METEOR_ALPHA = 0.9
METEOR_BETA = 3.0
METEOR_GAMMA = 0.5


def _match_stage(cand, ref, cand_free, ref_free, key):
    """First-available in-order unigram matching on key(token) equality."""
    pairs = []
    for i in cand_free:
        ki = key(cand[i])
        for j in ref_free:
            if key(ref[j]) == ki:
                pairs.append((i, j))
                ref_free.remove(j)
                break
    for i, _ in pairs:
        cand_free.remove(i)
    return pairs


def meteor(candidate: TokenizedText, reference: TokenizedText) -> float:
    """Unigram matching score with a fragmentation penalty.

    Alignment runs in two stages, exact match then Porter-stem match, each
    matching candidate tokens in order to the first still-unmatched
    reference token. With m total matches: P = m/|cand|, R = m/|ref|,
    Fmean = P*R / (alpha*P + (1-alpha)*R), penalty = gamma*(chunks/m)^beta,
    score = Fmean * (1 - penalty). Zero matches score 0. Chunks are maximal
    runs of matches contiguous and in order on both sides.
    """
    if not reference:
        raise ValueError("reference must be non-empty")
    if not candidate:
        return 0.0

    cand, ref = candidate.tokens, reference.tokens
    cand_free = list(range(len(cand)))
    ref_free = list(range(len(ref)))
    pairs = _match_stage(cand, ref, cand_free, ref_free, key=lambda t: t)
    pairs += _match_stage(cand, ref, cand_free, ref_free, key=stem)

    m = len(pairs)
    if m == 0:
        return 0.0

    pairs.sort()
    chunks = 1
    for (i1, j1), (i2, j2) in zip(pairs, pairs[1:]):
        if i2 != i1 + 1 or j2 != j1 + 1:
            chunks += 1

    p = m / len(cand)
    r = m / len(ref)
    fmean = p * r / (METEOR_ALPHA * p + (1 - METEOR_ALPHA) * r)
    penalty = METEOR_GAMMA * (chunks / m) ** METEOR_BETA
    return fmean * (1 - penalty)


@dataclass
class _TfIdfCorpus:
    """Per-order document frequencies over the reference set."""

    n_docs: int
    df: list[Counter] = field(default_factory=list)

    def idf(self, n: int, gram) -> float:
        return math.log(self.n_docs / max(1, self.df[n - 1][gram]))


def _tfidf_cosine(corpus: _TfIdfCorpus, a: Counter, b: Counter, n: int) -> float:
    if not a or not b:
        return 0.0
    dot = 0.0
    for gram, ca in a.items():
        cb = b.get(gram)
        if cb:
            w = corpus.idf(n, gram)
            dot += ca * cb * w * w
    if dot == 0.0:
        return 0.0
    norm_a = math.sqrt(sum((c * corpus.idf(n, g)) ** 2 for g, c in a.items()))
    norm_b = math.sqrt(sum((c * corpus.idf(n, g)) ** 2 for g, c in b.items()))
    if norm_a == 0.0 or norm_b == 0.0:
        return 0.0
    return dot / (norm_a * norm_b)


def cider(
    candidates: list[TokenizedText], references: list[TokenizedText]
) -> list[float]:
    """Consensus TF-IDF n-gram similarity, one score per pair.

    For each (candidate, reference) pair: the mean over n = 1..4 of the
    cosine similarity between TF-IDF n-gram count vectors, scaled by 10.
    IDF is log(|refs| / df) with document frequencies taken over the
    reference set of this call and clipped to at least 1; a cosine against
    an empty or zero vector is 0. Requires at least two references so the
    IDF corpus is meaningful.
    """
    if len(candidates) != len(references):
        raise ValueError("candidates and references must pair up")
    if len(references) < 2:
        raise ValueError("IDF corpus needs at least 2 references")

    corpus = _TfIdfCorpus(n_docs=len(references))
    for n in range(1, 5):
        df = Counter()
        for ref in references:
            df.update(set(_ngrams(ref.tokens, n)))
        corpus.df.append(df)

    scores = []
    for cand, ref in zip(candidates, references):
        total = 0.0
        for n in range(1, 5):
            total += _tfidf_cosine(
                corpus, _ngrams(cand.tokens, n), _ngrams(ref.tokens, n), n
            )
        scores.append(total / 4.0 * 10.0)
    return scores
