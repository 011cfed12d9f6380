"""Evaluation metrics as reported: BLEU-4, ROUGE-4 F1, unigram-entropy
corpus perplexity, and average sentence length."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .kernels import clipped_ngram_matches

EPSILON = 1e-9  # floor for zero n-gram precisions


@dataclass
class MetricReport:
    perplexity: float
    bleu4: float
    rouge4_f1: float
    avg_length: float


def _to_ids(*seqs: Sequence[str]) -> list[np.ndarray]:
    ids: dict[str, int] = {}
    out = []
    for seq in seqs:
        arr = np.empty(len(seq), dtype=np.int64)
        for i, tok in enumerate(seq):
            arr[i] = ids.setdefault(tok, len(ids))
        out.append(arr)
    return out


def bleu4(candidate: Sequence[str], references: Sequence[Sequence[str]]) -> float:
    """BLEU with modified n-gram precisions up to min(4, len(candidate))
    and brevity penalty against the closest-length reference.  Zero
    precisions are floored at EPSILON."""
    if not candidate:
        raise ValueError("empty candidate")
    if not references:
        raise ValueError("no references")
    arrays = _to_ids(candidate, *references)
    cand, refs = arrays[0], arrays[1:]
    max_n = min(4, len(candidate))
    log_sum = 0.0
    for n in range(1, max_n + 1):
        matches = 0
        total = 0
        for ref in refs:
            m, t = clipped_ngram_matches(cand, ref, n)
            matches = max(matches, m)
            total = t
        precision = matches / total if total else 0.0
        log_sum += math.log(max(precision, EPSILON))
    geo = math.exp(log_sum / max_n)
    closest = min((abs(len(r) - len(cand)), len(r)) for r in refs)[1]
    bp = 1.0 if len(cand) >= closest else math.exp(1.0 - closest / len(cand))
    return bp * geo


def rouge4_f1(candidate: Sequence[str], reference: Sequence[str]) -> float:
    """F1 over 4-gram overlap, scaled to [0, 100]."""
    if len(candidate) < 4 or len(reference) < 4:
        return 0.0
    cand, ref = _to_ids(candidate, reference)
    matches, cand_total = clipped_ngram_matches(cand, ref, 4)
    ref_total = len(reference) - 3
    if matches == 0:
        return 0.0
    precision = matches / cand_total
    recall = matches / ref_total
    return 100.0 * 2 * precision * recall / (precision + recall)


def corpus_perplexity(tokens: Sequence[str]) -> float:
    """2 ** (Shannon entropy of the text's unigram distribution)."""
    if not tokens:
        raise ValueError("empty text")
    counts = Counter(tokens)
    total = len(tokens)
    entropy = -sum((c / total) * math.log2(c / total) for c in counts.values())
    return 2.0 ** entropy


def avg_sentence_length(sentences: Sequence[Sequence[str]]) -> float:
    if not sentences:
        raise ValueError("no sentences")
    return sum(len(s) for s in sentences) / len(sentences)


def evaluate_corpus(
    predictions: Sequence[Sequence[str]], golds: Sequence[Sequence[str]]
) -> MetricReport:
    """Mean sentence-level BLEU-4/ROUGE-4 plus perplexity of the predicted
    text and its average sentence length."""
    if len(predictions) != len(golds):
        raise ValueError("prediction/gold length mismatch")
    bleu = sum(bleu4(p, [g]) for p, g in zip(predictions, golds)) / len(golds)
    rouge = sum(rouge4_f1(p, g) for p, g in zip(predictions, golds)) / len(golds)
    flat = [tok for p in predictions for tok in p]
    return MetricReport(
        perplexity=corpus_perplexity(flat),
        bleu4=bleu,
        rouge4_f1=rouge,
        avg_length=avg_sentence_length(predictions),
    )


def render_report(rows: dict[str, MetricReport]) -> str:
    """Text table with one row per model, columns as reported."""
    header = f"{'Model':<18}{'Perplexity':>12}{'BLEU':>10}{'ROUGE':>10}{'Length':>10}"
    lines = [header, "-" * len(header)]
    for name, r in rows.items():
        lines.append(
            f"{name:<18}{r.perplexity:>12.3f}{r.bleu4:>10.4f}"
            f"{r.rouge4_f1:>10.2f}{r.avg_length:>10.2f}"
        )
    return "\n".join(lines)
