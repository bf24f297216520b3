"""RAKE candidate extraction and degree/frequency scoring for one document.

Candidates are maximal runs of non-stopword tokens between phrase delimiters.
Scores are exact rationals: word_score(w) = deg(w) / freq(w), candidate score
is the sum over its (stemmed) member words. Degree and frequency are computed
on stemmed forms so inflected variants pool their evidence.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .textprep import stem, tokenize
from .vocab import normalize_label

# Sentence punctuation and brackets split candidate phrases; everything else
# merely separates words.
_DELIMITER_RE = re.compile(r'[.!?;:,()\[\]"\n\r]')


@dataclass(frozen=True)
class CandidatePhrase:
    text: str  # original surface, whitespace-normalized
    words: tuple[str, ...]  # stemmed content tokens
    score: Fraction = Fraction(0)


def extract_candidates(text: str, stopwords: set[str]) -> list[CandidatePhrase]:
    """Split text at phrase delimiters and stopwords; keep document order."""
    candidates: list[CandidatePhrase] = []
    for segment in _DELIMITER_RE.split(text):
        run: list[str] = []
        for token in tokenize(segment):
            if token.lower() in stopwords:
                if run:
                    candidates.append(_phrase(run))
                    run = []
            else:
                run.append(token)
        if run:
            candidates.append(_phrase(run))
    return candidates


def _phrase(tokens: Sequence[str]) -> CandidatePhrase:
    return CandidatePhrase(" ".join(tokens), tuple(stem(t) for t in tokens))


def word_statistics(candidates: Sequence[CandidatePhrase]) -> dict[str, tuple[int, int]]:
    """(freq, deg) per stemmed word; every occurrence counts, and each
    occurrence contributes its candidate's full length to deg."""
    stats: dict[str, tuple[int, int]] = {}
    for cand in candidates:
        length = len(cand.words)
        for word in cand.words:
            freq, deg = stats.get(word, (0, 0))
            stats[word] = (freq + 1, deg + length)
    return stats


def score_candidates(candidates: Sequence[CandidatePhrase]) -> list[CandidatePhrase]:
    """Attach deg/freq scores; candidate score sums its words' ratios."""
    stats = word_statistics(candidates)
    scored = []
    for cand in candidates:
        total = sum(
            (Fraction(stats[w][1], stats[w][0]) for w in cand.words), Fraction(0)
        )
        scored.append(CandidatePhrase(cand.text, cand.words, total))
    return scored


def top_candidates(scored: Iterable[CandidatePhrase], limit: int) -> list[CandidatePhrase]:
    """Dedup by normalized text keeping the max score; rank; truncate."""
    if limit < 1:
        raise ValueError("limit must be a positive integer")
    best: dict[str, CandidatePhrase] = {}
    for cand in scored:
        key = normalize_label(cand.text)
        prior = best.get(key)
        if prior is None or (cand.score, prior.text) > (prior.score, cand.text):
            # higher score wins; equal scores keep the lexicographically
            # smaller surface so the result is order-insensitive
            best[key] = cand
    ranked = sorted(best.values(), key=lambda c: (-c.score, c.text))
    return ranked[:limit]


def ranked_candidates(text: str, stopwords: set[str]) -> list[CandidatePhrase]:
    """Full pipeline: extract, score, dedup, rank (no truncation)."""
    scored = score_candidates(extract_candidates(text, stopwords))
    if not scored:
        return []
    return top_candidates(scored, len(scored))
