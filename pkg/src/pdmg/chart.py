"""Chart parsing: which item sequences derive a given sentence?

The merge/move rules are reinterpreted over token spans.  A chart item is a
head (span, feature suffix) plus movers (span, suffix); all spans in one
item are pairwise disjoint (empty spans are disjoint from everything).
Axioms instantiate token-matching items over (i, i+1) and covert items over
every empty span (i, i).  The rules mirror the string semantics:

- merge_left needs t.end == s.start and yields head (t.start, s.end);
- merge_right needs s.end == t.start and yields (s.start, t.end);
- merge_mover imposes no adjacency: t's span rides along as a mover;
- move_final needs mover.end == head.start and yields (mover.start, end);
- move_again rewrites the mover's suffix in place.

Consequences violating span disjointness or the shortest-move constraint
are simply not derived.  Mover lists are kept sorted by licensee name
(unique under the SMC), so items built along different rule orders dedupe.

The goal is the head (0, n) with suffix exactly the start category and no
movers.  Extraction walks goal back-pointers depth-first and returns one
polish-order item sequence per distinct derivation, deduplicated and
sorted by item ids.  Covert leaves per derivation are capped (max_covert),
which also bounds the unwinding of covert recursion cycles; the number of
distinct sequences is capped by max_derivations and the total closure plus
extraction work by max_steps.  Exceeding a cap raises CapExceeded rather
than silently truncating.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterator, NamedTuple, Sequence

from .errors import CapExceeded, UnknownCategoryError
from .lexicon import Feature, FeatureKind, LexicalItem, Lexicon

Mover = tuple[int, int, tuple[Feature, ...]]


class ChartItem(NamedTuple):
    start: int
    end: int
    suffix: tuple[Feature, ...]
    movers: tuple[Mover, ...]


# Back-pointer tags.
LEX = "lex"
MERGE_L = "merge-L"
MERGE_R = "merge-R"
MERGE_M = "merge-m"
MOVE_1 = "move-1"
MOVE_2 = "move-2"

BackPointer = tuple  # (LEX, global_item_index) | (tag, s) | (tag, s, t)


@dataclass(frozen=True)
class ParseConfig:
    start: str
    max_derivations: int = 10_000
    max_covert: int = 3
    max_steps: int = 1_000_000


@dataclass(frozen=True)
class DerivationForest:
    tokens: tuple[str, ...]
    chart: dict[ChartItem, tuple[BackPointer, ...]] = field(repr=False)
    goal: ChartItem | None
    sequences: tuple[tuple[LexicalItem, ...], ...]

    @property
    def count(self) -> int:
        return len(self.sequences)


def _canon_movers(movers: Sequence[Mover]) -> tuple[Mover, ...] | None:
    """Sort movers by leading licensee; None on an SMC violation."""
    names = [m[2][0].name for m in movers]
    if len(set(names)) != len(names):
        return None
    return tuple(m for _, m in sorted(zip(names, movers)))


def _spans_disjoint(head: tuple[int, int], movers: Sequence[Mover]) -> bool:
    spans = [head] + [(m[0], m[1]) for m in movers]
    spans = sorted(s for s in spans if s[0] != s[1])
    return all(spans[i][1] <= spans[i + 1][0] for i in range(len(spans) - 1))


def _consequences(s: ChartItem, t: ChartItem) -> Iterator[tuple[ChartItem, BackPointer]]:
    """Binary rules with s as the selecting head and t as the argument."""
    if not s.suffix or not t.suffix:
        return
    f = s.suffix[0]
    if not f.is_selector:
        return
    g = t.suffix[0]
    if g.kind is not FeatureKind.CAT or g.name != f.name:
        return
    if len(t.suffix) == 1:
        if f.kind is FeatureKind.SEL_LEFT and t.end == s.start:
            head, tag = (t.start, s.end), MERGE_L
            movers = _canon_movers(t.movers + s.movers)
        elif f.kind is FeatureKind.SEL_RIGHT and s.end == t.start:
            head, tag = (s.start, t.end), MERGE_R
            movers = _canon_movers(s.movers + t.movers)
        else:
            return
        if movers is None or not _spans_disjoint(head, movers):
            return
        yield ChartItem(head[0], head[1], s.suffix[1:], movers), (tag, s, t)
    else:
        new_mover: Mover = (t.start, t.end, t.suffix[1:])
        movers = _canon_movers(s.movers + (new_mover,) + t.movers)
        if movers is None or not _spans_disjoint((s.start, s.end), movers):
            return
        yield ChartItem(s.start, s.end, s.suffix[1:], movers), (MERGE_M, s, t)


def _move_consequences(s: ChartItem) -> Iterator[tuple[ChartItem, BackPointer]]:
    if not s.suffix or s.suffix[0].kind is not FeatureKind.LICENSOR:
        return
    y = s.suffix[0].name
    for i, m in enumerate(s.movers):
        if m[2][0].name != y:
            continue
        rest = s.movers[:i] + s.movers[i + 1:]
        if len(m[2]) == 1:
            if m[1] == s.start:
                yield ChartItem(m[0], s.end, s.suffix[1:], rest), (MOVE_1, s)
        else:
            movers = _canon_movers(rest + ((m[0], m[1], m[2][1:]),))
            if movers is not None:
                yield ChartItem(s.start, s.end, s.suffix[1:], movers), (MOVE_2, s)
        return  # SMC: at most one mover can lead with -y


def parse(lex: Lexicon, tokens: Sequence[str], cfg: ParseConfig) -> DerivationForest:
    """Close the chart over ``tokens`` and extract the goal's sequences.

    Unknown tokens and uncovered sentences yield an empty forest, not an
    error.  An unknown start category is an error; cap overruns raise
    CapExceeded.
    """
    if not lex.has_category(cfg.start):
        raise UnknownCategoryError(f"start category {cfg.start!r} not in lexicon")
    tokens = tuple(tokens)
    n = len(tokens)
    steps = 0

    chart: dict[ChartItem, list[BackPointer]] = {}
    agenda: deque[ChartItem] = deque()

    def derive(item: ChartItem, bp: BackPointer) -> None:
        bps = chart.get(item)
        if bps is None:
            chart[item] = [bp]
            agenda.append(item)
        elif bp not in bps:
            bps.append(bp)

    for i, tok in enumerate(tokens):
        for it in lex.items_by_phon(tok):
            derive(ChartItem(i, i + 1, it.features, ()), (LEX, lex.global_index(it)))
    for it in lex.covert_items():
        for i in range(n + 1):
            derive(ChartItem(i, i, it.features, ()), (LEX, lex.global_index(it)))

    done: list[ChartItem] = []
    done_set: set[ChartItem] = set()
    while agenda:
        x = agenda.popleft()
        if x in done_set:
            continue
        done.append(x)
        done_set.add(x)
        steps += 1
        if steps > cfg.max_steps:
            raise CapExceeded(
                f"chart closure exceeded {cfg.max_steps} steps "
                f"(covert-recursion cycle?)")
        for y in done:
            for item, bp in _consequences(x, y):
                derive(item, bp)
            if y is not x:
                for item, bp in _consequences(y, x):
                    derive(item, bp)
        for item, bp in _move_consequences(x):
            derive(item, bp)

    goal = ChartItem(0, n, (Feature(FeatureKind.CAT, cfg.start),), ())
    frozen = {item: tuple(bps) for item, bps in chart.items()}
    if goal not in frozen:
        return DerivationForest(tokens, frozen, None, ())

    sequences = _extract(frozen, goal, lex, cfg, steps)
    return DerivationForest(tokens, frozen, goal, sequences)


def _extract(
    chart: dict[ChartItem, tuple[BackPointer, ...]],
    goal: ChartItem,
    lex: Lexicon,
    cfg: ParseConfig,
    steps_used: int,
) -> tuple[tuple[LexicalItem, ...], ...]:
    budget = [cfg.max_steps - steps_used]

    def expand(item: ChartItem, covert_budget: int) -> Iterator[tuple[tuple[int, ...], int]]:
        budget[0] -= 1
        if budget[0] < 0:
            raise CapExceeded(
                f"derivation extraction exceeded {cfg.max_steps} steps "
                f"(covert-recursion cycle?)")
        for bp in chart[item]:
            tag = bp[0]
            if tag == LEX:
                cost = 1 if lex.item_at(bp[1]).phon == "" else 0
                if cost <= covert_budget:
                    yield (bp[1],), cost
            elif tag in (MOVE_1, MOVE_2):
                yield from expand(bp[1], covert_budget)
            else:
                for s_ids, s_cost in expand(bp[1], covert_budget):
                    for t_ids, t_cost in expand(bp[2], covert_budget - s_cost):
                        yield s_ids + t_ids, s_cost + t_cost

    found: set[tuple[int, ...]] = set()
    for ids, _ in expand(goal, cfg.max_covert):
        found.add(ids)
        if len(found) > cfg.max_derivations:
            raise CapExceeded(
                f"more than {cfg.max_derivations} distinct derivations")
    return tuple(
        tuple(lex.item_at(g) for g in ids) for ids in sorted(found)
    )


def extract_sequences(forest: DerivationForest) -> tuple[tuple[LexicalItem, ...], ...]:
    """The forest's polish-order sequences, one per distinct derivation."""
    return forest.sequences
