"""Command-line interface.

Exit codes: 0 success; 1 a checked sequence was rejected; 2 bad input
(lexicon, references, model vectors); 3 evaluation or coverage failure;
4 a configured cap was exceeded.
"""

from __future__ import annotations

import math
import sys
from typing import Callable, Sequence

import click
import numpy as np

from .chart import ParseConfig, parse
from .corpus import canonical_json, load_corpus
from .errors import (CapExceeded, EvalError, LexiconError, PdmgError,
                     UnparsedSentence)
from .inference import TrainConfig, train
from .lexicon import LexicalItem, Lexicon, load_lexicon
from .model import (SampleConfig, load_alpha, load_theta, log_prob_of_sequence,
                    ones_alpha, sample_derivation, uniform_theta)
from .structure import (derived_category, eval_sequence, render_tree,
                        seq_to_tree)
from .wellformed import trace_wellformed

REJECTED = 1
BAD_INPUT = 2
EVAL_FAILURE = 3
CAP_EXCEEDED = 4


def _run(body: Callable[[], int | None]) -> None:
    try:
        code = body()
    except CapExceeded as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(CAP_EXCEEDED)
    except (EvalError, UnparsedSentence) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EVAL_FAILURE)
    except PdmgError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(BAD_INPUT)
    except OSError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(BAD_INPUT)
    sys.exit(code or 0)


def resolve_item(lexicon: Lexicon, ref: str) -> LexicalItem:
    """Resolve ``phon@k.m`` (0-based category.item) or a bare unique phon."""
    if "@" in ref:
        phon, _, pos = ref.rpartition("@")
        parts = pos.split(".")
        if len(parts) != 2 or not all(p.isdigit() for p in parts):
            raise LexiconError(f"bad item reference {ref!r}: "
                               "expected phon@<cat>.<item> with integers")
        k, m = int(parts[0]), int(parts[1])
        if k >= len(lexicon.categories):
            raise LexiconError(f"bad item reference {ref!r}: "
                               f"no category index {k}")
        items = lexicon.items_of_category(lexicon.categories[k])
        if m >= len(items):
            raise LexiconError(f"bad item reference {ref!r}: category "
                               f"{lexicon.categories[k]!r} has {len(items)} items")
        item = items[m]
        want = "" if phon in ("ε", "eps") else phon
        if item.phon != want:
            raise LexiconError(f"bad item reference {ref!r}: item at "
                               f"{k}.{m} is {item.ref}")
        return item
    phon = "" if ref in ("ε", "eps") else ref
    matches = lexicon.items_by_phon(phon)
    if not matches:
        raise LexiconError(f"no lexical item spelled {ref!r}")
    if len(matches) > 1:
        options = ", ".join(it.ref for it in matches)
        raise LexiconError(f"{ref!r} is ambiguous; use one of: {options}")
    return matches[0]


def _ids(seq: Sequence[LexicalItem]) -> list[list[int]]:
    return [[it.cat_index, it.item_index] for it in seq]


@click.group()
@click.version_option(package_name="pdmg")
def main() -> None:
    """Derivation sequences: check, enumerate, score, sample, train."""


@main.command()
@click.argument("lexicon_path", metavar="LEXICON")
def validate(lexicon_path: str) -> None:
    """Parse LEXICON and summarize it."""
    def body() -> None:
        lex = load_lexicon(lexicon_path)
        click.echo(f"{lex.n_items} items, {len(lex.categories)} categories")
        for k, cat in enumerate(lex.categories):
            items = ", ".join(it.ref for it in lex.items_of_category(cat))
            click.echo(f"  [{k}] {cat}: {items}")
        covert = lex.covert_items()
        if covert:
            click.echo("covert: " + ", ".join(it.ref for it in covert))
        for name, group in lex.smc_risk_groups().items():
            refs = ", ".join(it.ref for it in group)
            click.echo(f"note: several items lead with -{name}: {refs}")
    _run(body)


@main.command("check-seq")
@click.argument("lexicon_path", metavar="LEXICON")
@click.argument("refs", metavar="ITEM...", nargs=-1, required=True)
@click.option("--trace/--no-trace", default=True, show_default=True,
              help="Print each cursor action.")
def check_seq(lexicon_path: str, refs: tuple[str, ...], trace: bool) -> None:
    """Run the well-formedness check on an item sequence."""
    def body() -> int:
        lex = load_lexicon(lexicon_path)
        seq = tuple(resolve_item(lex, r) for r in refs)
        result = trace_wellformed(seq)
        if trace:
            for i, step in enumerate(result.steps, start=1):
                where = "-" if step.position < 0 else str(step.position)
                click.echo(f"{i:3d}  pos={where:>2}  {step.action:<14} {step.detail}")
        click.echo("well-formed" if result.verdict else "ill-formed")
        return 0 if result.verdict else REJECTED
    _run(body)


@main.command()
@click.argument("lexicon_path", metavar="LEXICON")
@click.argument("refs", metavar="ITEM...", nargs=-1, required=True)
def derive(lexicon_path: str, refs: tuple[str, ...]) -> None:
    """Build the tree for an item sequence and spell out its string."""
    def body() -> None:
        lex = load_lexicon(lexicon_path)
        seq = tuple(resolve_item(lex, r) for r in refs)
        tree = seq_to_tree(seq)
        click.echo(render_tree(tree))
        words = eval_sequence(seq)
        click.echo(f"category: {derived_category(seq)}")
        click.echo(f"string: {words if words else 'ε'}")
    _run(body)


@main.command("parse")
@click.argument("lexicon_path", metavar="LEXICON")
@click.argument("sentences", metavar="[SENTENCE]...", nargs=-1)
@click.option("--start", required=True, help="Category a derivation must yield.")
@click.option("--corpus", "corpus_path", default=None,
              help="Read sentences from a file (one per line) as well.")
@click.option("--max-derivations", default=10_000, show_default=True)
@click.option("--max-covert", default=3, show_default=True,
              help="Unpronounced leaves allowed per derivation.")
@click.option("--max-steps", default=1_000_000, show_default=True)
def parse_cmd(lexicon_path: str, sentences: tuple[str, ...], start: str,
              corpus_path: str | None, max_derivations: int, max_covert: int,
              max_steps: int) -> None:
    """Enumerate the derivations of each sentence; one JSON line each."""
    def body() -> None:
        lex = load_lexicon(lexicon_path)
        todo = list(sentences)
        if corpus_path is not None:
            todo.extend(load_corpus(corpus_path))
        cfg = ParseConfig(start=start, max_derivations=max_derivations,
                          max_covert=max_covert, max_steps=max_steps)
        for sentence in todo:
            forest = parse(lex, sentence.split(), cfg)
            payload = {
                "sentence": sentence,
                "count": forest.count,
                "derivations": [_ids(seq) for seq in forest.sequences],
            }
            click.echo(canonical_json(payload))
    _run(body)


@main.command()
@click.argument("lexicon_path", metavar="LEXICON")
@click.argument("sentence", metavar="SENTENCE")
@click.option("--start", required=True, help="Category a derivation must yield.")
@click.option("--theta", "theta_path", default=None,
              help="Item probabilities as JSON (default: uniform per category).")
@click.option("--max-derivations", default=10_000, show_default=True)
@click.option("--max-covert", default=3, show_default=True)
@click.option("--max-steps", default=1_000_000, show_default=True)
def score(lexicon_path: str, sentence: str, start: str, theta_path: str | None,
          max_derivations: int, max_covert: int, max_steps: int) -> None:
    """Sum derivation probabilities for SENTENCE; one JSON object."""
    def body() -> None:
        lex = load_lexicon(lexicon_path)
        theta = (uniform_theta(lex) if theta_path is None
                 else load_theta(theta_path, lex))
        cfg = ParseConfig(start=start, max_derivations=max_derivations,
                          max_covert=max_covert, max_steps=max_steps)
        forest = parse(lex, sentence.split(), cfg)
        logs = [log_prob_of_sequence(seq, theta) for seq in forest.sequences]
        finite = [lp for lp in logs if lp != -math.inf]
        total = (math.exp(_logsumexp(finite)) if finite else 0.0)
        payload = {
            "sentence": sentence,
            "count": forest.count,
            "prob": total,
            "derivations": [
                {"items": _ids(seq),
                 "prob": 0.0 if lp == -math.inf else math.exp(lp)}
                for seq, lp in zip(forest.sequences, logs)
            ],
        }
        click.echo(canonical_json(payload))
    _run(body)


def _logsumexp(values: list[float]) -> float:
    m = max(values)
    return m + math.log(math.fsum(math.exp(v - m) for v in values))


@main.command()
@click.argument("lexicon_path", metavar="LEXICON")
@click.option("--start", required=True, help="Category to expand from.")
@click.option("-n", "count", default=1, show_default=True,
              help="Number of sequences to draw.")
@click.option("--seed", type=int, default=None, help="RNG seed.")
@click.option("--theta", "theta_path", default=None,
              help="Item probabilities as JSON (default: uniform per category).")
@click.option("--max-depth", default=64, show_default=True)
@click.option("--max-rejections", default=10_000, show_default=True)
def sample(lexicon_path: str, start: str, count: int, seed: int | None,
           theta_path: str | None, max_depth: int, max_rejections: int) -> None:
    """Draw well-formed sequences; one line of item references each."""
    def body() -> None:
        lex = load_lexicon(lexicon_path)
        theta = (uniform_theta(lex) if theta_path is None
                 else load_theta(theta_path, lex))
        cfg = SampleConfig(start=start, max_depth=max_depth,
                           max_rejections=max_rejections)
        rng = np.random.default_rng(seed)
        for _ in range(count):
            seq, _rejected = sample_derivation(lex, theta, cfg, rng)
            click.echo(" ".join(it.ref for it in seq))
    _run(body)


@main.command("train")
@click.argument("lexicon_path", metavar="LEXICON")
@click.argument("corpus_path", metavar="CORPUS")
@click.option("--start", required=True, help="Category a derivation must yield.")
@click.option("--alpha", "alpha_path", default=None,
              help="Dirichlet pseudo-counts as JSON (default: all ones).")
@click.option("--tol", default=1.0e-6, show_default=True,
              help="Stop when the bound moves less than this.")
@click.option("--max-iters", default=100, show_default=True)
@click.option("--skip-unparsed", is_flag=True,
              help="Drop underivable sentences instead of failing.")
@click.option("--out", "out_path", default="result.json", show_default=True,
              help="Where to write the fitted model.")
@click.option("--max-derivations", default=10_000, show_default=True)
@click.option("--max-covert", default=3, show_default=True)
@click.option("--max-steps", default=1_000_000, show_default=True)
def train_cmd(lexicon_path: str, corpus_path: str, start: str,
              alpha_path: str | None, tol: float, max_iters: int,
              skip_unparsed: bool, out_path: str, max_derivations: int,
              max_covert: int, max_steps: int) -> None:
    """Fit per-item probabilities to CORPUS and write a JSON result."""
    def body() -> None:
        lex = load_lexicon(lexicon_path)
        alpha = (ones_alpha(lex) if alpha_path is None
                 else load_alpha(alpha_path, lex))
        sentences = load_corpus(corpus_path)
        cfg = TrainConfig(start=start, tol=tol, max_iters=max_iters,
                          skip_unparsed=skip_unparsed,
                          max_derivations=max_derivations,
                          max_covert=max_covert, max_steps=max_steps)
        state = train(lex, sentences, alpha, cfg)
        payload = {
            "omega": state.omega,
            "theta_mean": state.theta_mean,
            "elbo_trace": state.elbo_trace,
            "iterations": state.iterations,
            "converged": state.converged,
            "unparsed": state.unparsed,
        }
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(canonical_json(payload))
            fh.write("\n")
        status = "converged" if state.converged else "stopped"
        bound = state.elbo_trace[-1] if state.elbo_trace else float("nan")
        click.echo(f"{status} after {state.iterations} iterations, "
                   f"bound {bound:.6f}, wrote {out_path}")
    _run(body)


if __name__ == "__main__":
    main()
