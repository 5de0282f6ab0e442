"""Order-n token models over whitespace-tokenized corpora.

The deterministic stand-in for the remote story model: exact successor
counts, temperature sampling over them, and sentence-aware start contexts.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from rumourmill.errors import DocumentTooShort, EmptyCorpus
from rumourmill.params import Genre
from rumourmill.sampling import temperature_sample

logger = logging.getLogger(__name__)

SENTENCE_ENDS = (".", "!", "?")

Context = Tuple[str, ...]


def _is_sentence_end(token: str) -> bool:
    return token.endswith(SENTENCE_ENDS)


@dataclass
class NgramModel:
    """Exact (n-1)-context successor counts plus sentence-initial contexts."""

    order: int
    table: Dict[Context, Dict[str, int]] = field(default_factory=dict)
    start_contexts: List[Context] = field(default_factory=list)
    genre: Optional[Genre] = None

    def successors(self, context: Context) -> Optional[Dict[str, int]]:
        return self.table.get(context)


def build_ngram_model(corpus: Sequence[str], n: int, genre: Optional[Genre] = None) -> NgramModel:
    """Count every (context, successor) pair in the corpus.

    Documents shorter than n tokens are skipped; it is an error only when
    nothing at all survives.
    """
    if n < 2:
        raise ValueError(f"order {n} must be >= 2")
    if len(corpus) == 0:
        raise EmptyCorpus("no documents supplied")

    model = NgramModel(order=n, genre=genre)
    skipped = 0
    for doc in corpus:
        tokens = doc.split()
        if len(tokens) < n:
            skipped += 1
            continue
        for i in range(len(tokens) - n + 1):
            context = tuple(tokens[i : i + n - 1])
            successor = tokens[i + n - 1]
            counts = model.table.setdefault(context, {})
            counts[successor] = counts.get(successor, 0) + 1
        # Sentence-initial contexts: the document start plus each position
        # following a terminator, if enough tokens remain to continue.
        starts = [0] + [i + 1 for i, tok in enumerate(tokens) if _is_sentence_end(tok)]
        for s in starts:
            context = tuple(tokens[s : s + n - 1])
            if context in model.table:
                model.start_contexts.append(context)
    if skipped:
        logger.warning("skipped %d document(s) shorter than %d tokens", skipped, n)
    if not model.table:
        raise DocumentTooShort(f"all {len(corpus)} document(s) shorter than {n} tokens")
    return model


def generate_text(
    model: NgramModel,
    temperature: float,
    rng: random.Random,
    max_tokens: int,
    stop_sentences: int = 4,
    seed: Optional[str] = None,
) -> str:
    """Walk the chain with temperature sampling and detokenize.

    Stops at max_tokens, after stop_sentences terminators, or when the walk
    leaves the table. When a seed is given and its trailing (n-1) tokens are
    a known context, the output is the continuation only; otherwise the walk
    begins at an rng-chosen sentence start whose tokens are included.
    """
    if max_tokens < 1:
        raise ValueError(f"max_tokens {max_tokens} must be >= 1")

    context: Optional[Context] = None
    out: List[str] = []
    if seed is not None:
        tail = tuple(seed.split()[-(model.order - 1) :])
        if tail in model.table:
            context = tail
    if context is None:
        context = rng.choice(model.start_contexts)
        out.extend(context[:max_tokens])

    sentences = sum(1 for tok in out if _is_sentence_end(tok))
    while len(out) < max_tokens and sentences < stop_sentences:
        counts = model.successors(context)
        if counts is None:
            break
        assert counts, "n-gram table contexts always have successors"
        tokens = list(counts.keys())
        idx = temperature_sample(list(counts.values()), temperature, rng)
        token = tokens[idx]
        out.append(token)
        if _is_sentence_end(token):
            sentences += 1
        context = (*context[1:], token)

    text = " ".join(out)
    return text[:1].upper() + text[1:]
