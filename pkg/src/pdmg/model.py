"""Probability model over derivation sequences.

A parameter vector assigns each lexical item a probability, normalized
within its category.  The probability of a derivation sequence is the
product over its items of those per-item probabilities; sequences that
fail the well-formedness check carry probability zero.

``sample_derivation`` draws from the model by top-down expansion: grow a
sequence from the start category by repeatedly spelling out a head and
recursing into its selector slots (first selector first, so the emitted
order is exactly the head-first flattening the checker expects), then
keep the draw only if the checker accepts it.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .errors import ArityError, CapExceeded, InvalidModel, UnknownCategoryError
from .lexicon import LexicalItem, Lexicon
from .numerics import gammaln
from .wellformed import is_wellformed

_NORM_TOL = 1.0e-12

Theta = dict[str, list[float]]
Alpha = dict[str, list[float]]


def validate_theta(lexicon: Lexicon, theta: Mapping[str, Sequence[float]]) -> Theta:
    """Check shape, positivity, and per-category normalization of theta."""
    out: Theta = {}
    for cat in lexicon.categories:
        if cat not in theta:
            raise InvalidModel(f"theta missing category {cat!r}")
        row = [float(v) for v in theta[cat]]
        n = len(lexicon.items_of_category(cat))
        if len(row) != n:
            raise InvalidModel(
                f"theta[{cat!r}] has {len(row)} entries, lexicon has {n} items")
        for v in row:
            if not math.isfinite(v) or v < 0.0:
                raise InvalidModel(f"theta[{cat!r}] entries must be finite and >= 0")
        s = math.fsum(row)
        if abs(s - 1.0) > _NORM_TOL:
            raise InvalidModel(
                f"theta[{cat!r}] sums to {s!r}, expected 1 within {_NORM_TOL}")
        out[cat] = row
    extra = set(theta) - set(lexicon.categories)
    if extra:
        raise InvalidModel(f"theta has unknown categories: {sorted(extra)}")
    return out


def validate_alpha(lexicon: Lexicon, alpha: Mapping[str, Sequence[float]]) -> Alpha:
    """Check shape and strict positivity of Dirichlet pseudo-counts."""
    out: Alpha = {}
    for cat in lexicon.categories:
        if cat not in alpha:
            raise InvalidModel(f"alpha missing category {cat!r}")
        row = [float(v) for v in alpha[cat]]
        n = len(lexicon.items_of_category(cat))
        if len(row) != n:
            raise InvalidModel(
                f"alpha[{cat!r}] has {len(row)} entries, lexicon has {n} items")
        for v in row:
            if not math.isfinite(v) or v <= 0.0:
                raise InvalidModel(f"alpha[{cat!r}] entries must be finite and > 0")
        out[cat] = row
    extra = set(alpha) - set(lexicon.categories)
    if extra:
        raise InvalidModel(f"alpha has unknown categories: {sorted(extra)}")
    return out


def uniform_theta(lexicon: Lexicon) -> Theta:
    return {cat: [1.0 / len(lexicon.items_of_category(cat))]
            * len(lexicon.items_of_category(cat))
            for cat in lexicon.categories}


def ones_alpha(lexicon: Lexicon) -> Alpha:
    return {cat: [1.0] * len(lexicon.items_of_category(cat))
            for cat in lexicon.categories}


def load_theta(path: str, lexicon: Lexicon) -> Theta:
    with open(path, encoding="utf-8") as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InvalidModel(f"{path}: not valid JSON ({exc})") from None
    if not isinstance(raw, dict):
        raise InvalidModel(f"{path}: expected a JSON object of category -> list")
    return validate_theta(lexicon, raw)


def load_alpha(path: str, lexicon: Lexicon) -> Alpha:
    with open(path, encoding="utf-8") as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InvalidModel(f"{path}: not valid JSON ({exc})") from None
    if not isinstance(raw, dict):
        raise InvalidModel(f"{path}: expected a JSON object of category -> list")
    return validate_alpha(lexicon, raw)


def log_prob_of_sequence(seq: Sequence[LexicalItem],
                         theta: Mapping[str, Sequence[float]]) -> float:
    """log P(sequence | theta); -inf when the checker rejects it."""
    if not seq:
        raise ArityError("cannot score an empty sequence")
    if not is_wellformed(seq):
        return -math.inf
    total = 0.0
    for it in seq:
        p = theta[it.category][it.item_index]
        if p <= 0.0:
            return -math.inf
        total += math.log(p)
    return total


def prob_of_sequence(seq: Sequence[LexicalItem],
                     theta: Mapping[str, Sequence[float]]) -> float:
    lp = log_prob_of_sequence(seq, theta)
    return 0.0 if lp == -math.inf else math.exp(lp)


def log_dirichlet_density(row: Sequence[float], alpha_row: Sequence[float]) -> float:
    """log Dir(row | alpha_row) for one category's parameter vector."""
    a = np.asarray(alpha_row, dtype=np.float64)
    x = np.asarray(row, dtype=np.float64)
    if np.any(x <= 0.0):
        return -math.inf
    lognorm = float(gammaln(np.array([a.sum()]))[0] - np.sum(gammaln(a)))
    return lognorm + float(np.sum((a - 1.0) * np.log(x)))


def log_joint(seq: Sequence[LexicalItem], theta: Mapping[str, Sequence[float]],
              alpha: Mapping[str, Sequence[float]], lexicon: Lexicon) -> float:
    """log [ Dir(theta | alpha) * P(sequence | theta) ].

    Raises when the sequence is rejected by the checker: an impossible
    derivation has no joint density to report.
    """
    lp = log_prob_of_sequence(seq, theta)
    if lp == -math.inf:
        raise InvalidModel("sequence is not well-formed; log joint undefined")
    prior = 0.0
    for cat in lexicon.categories:
        prior += log_dirichlet_density(theta[cat], alpha[cat])
    return prior + lp


def sample_theta(lexicon: Lexicon, alpha: Mapping[str, Sequence[float]],
                 seed: int | None = None) -> Theta:
    """Draw theta ~ Dir(alpha), one draw per category in lexicon order."""
    rng = np.random.default_rng(seed)
    out: Theta = {}
    for cat in lexicon.categories:
        out[cat] = [float(v) for v in rng.dirichlet(np.asarray(alpha[cat]))]
    return out


@dataclass(frozen=True)
class SampleConfig:
    start: str
    max_depth: int = 64
    max_rejections: int = 10_000


def sample_derivation(lexicon: Lexicon, theta: Mapping[str, Sequence[float]],
                      config: SampleConfig,
                      rng: np.random.Generator | None = None,
                      ) -> tuple[tuple[LexicalItem, ...], int]:
    """Draw one well-formed sequence; returns (sequence, rejected_count).

    Proposals come from the top-down expansion of the start category;
    draws the checker rejects are discarded and retried.  Exceeding
    ``max_depth`` during a proposal, or ``max_rejections`` overall,
    raises CapExceeded.
    """
    if not lexicon.has_category(config.start):
        raise UnknownCategoryError(f"unknown start category {config.start!r}")
    if rng is None:
        rng = np.random.default_rng()
    probs = {cat: np.asarray(theta[cat], dtype=np.float64)
             for cat in lexicon.categories}

    def propose() -> tuple[LexicalItem, ...]:
        out: list[LexicalItem] = []
        stack = [(config.start, 0)]
        while stack:
            cat, depth = stack.pop()
            if depth >= config.max_depth:
                raise CapExceeded(
                    f"sampler exceeded max depth {config.max_depth}")
            items = lexicon.items_of_category(cat)
            head = items[int(rng.choice(len(items), p=probs[cat]))]
            out.append(head)
            # Push selectors reversed so the first selector is expanded
            # first, keeping the emitted order head-first.
            for f in reversed(head.selectors):
                stack.append((f.name, depth + 1))
        return tuple(out)

    rejected = 0
    while True:
        try:
            seq = propose()
        except UnknownCategoryError:
            # Head demanded a category no item provides: a dead proposal.
            seq = None
        if seq is not None and is_wellformed(seq):
            return seq, rejected
        rejected += 1
        if rejected >= config.max_rejections:
            raise CapExceeded(
                f"sampler exceeded {config.max_rejections} rejected draws")
