"""Cursor-based well-formedness check for item sequences.

A derivation is written as a flat sequence of lexical items in polish order:
the head item first, then the subsequence deriving its first selector's
argument, then the second selector's, and so on.  Whether such a sequence is
the traversal of some convergent derivation can be decided by a single
cursor walking the sequence and deleting features as they check:

1. Leading selector: move right to the next item not reduced to bare
   licensees (such items are checked-out movers waiting for a licensor;
   they are transparent here just as they are in rule 2b's search).
2. Leading category:
   a. on the root item (leftmost at start) delete it unconditionally;
   b. otherwise find the nearest item to the left that still carries a
      category feature anywhere in its remainder (items reduced to bare
      licensees, or to nothing, are skipped); if that item's leading
      feature is a selector for this category, delete both features and
      continue from the current item;
   c. otherwise the sequence is ill-formed.
3. Leading licensee: move one item left.
4. Leading licensor +y: find the nearest item to the right whose leading
   feature is the licensee -y;
   a. no such item: ill-formed;
   b. an item still carrying a category feature sits in between: ill-formed;
   c. otherwise delete both features and continue from the current item.
5. No features left: delete the item and continue from its left neighbour,
   or its right neighbour if there is none.

The sequence is well-formed iff every item and feature is deleted.  Two
dead ends make the walk total: a leading selector with nothing checkable
to its right, and a leading licensee with no item to its left, both mean
the feature can never check, so they reject.  A no-progress check (the
cursor revisiting an item with no deletion in between) backstops any
remaining way to wander: deletions strictly shrink the state, so the
walk always terminates, and since it is deterministic a loop could never
have led to acceptance.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .lexicon import Feature, FeatureKind, LexicalItem

# Action tags recorded in traces.
SKIP_RIGHT = "skip-right"          # rule 1
ROOT_CATEGORY = "root-category"    # rule 2a
CATEGORY_MATCH = "category-match"  # rule 2b
LICENSEE_LEFT = "licensee-left"    # rule 3
LICENSOR_MATCH = "licensor-match"  # rule 4c
DELETE_ITEM = "delete-item"        # rule 5
ACCEPT = "accept"
REJECT = "reject"


@dataclass(frozen=True)
class TraceStep:
    """One cursor action.

    ``position`` is the cursor item's index in the original sequence (-1 on
    the terminal accept step), ``remaining`` the surviving items and their
    unchecked features after the action.
    """

    position: int
    action: str
    detail: str
    remaining: tuple[tuple[str, tuple[Feature, ...]], ...]


@dataclass(frozen=True)
class CursorTrace:
    steps: tuple[TraceStep, ...]
    verdict: bool


def is_wellformed(seq: Sequence[LexicalItem]) -> bool:
    """True iff ``seq`` is the polish traversal of a convergent derivation."""
    return _run(seq, record=False)[0]


def trace_wellformed(seq: Sequence[LexicalItem]) -> CursorTrace:
    """Like ``is_wellformed`` but records every cursor action.

    A true verdict's trace ends with an ``accept`` step on the empty
    sequence; a false verdict's trace ends with a ``reject`` step naming
    the failing rule.
    """
    verdict, steps = _run(seq, record=True)
    return CursorTrace(steps=tuple(steps), verdict=verdict)


def _run(seq: Sequence[LexicalItem], record: bool) -> tuple[bool, list[TraceStep]]:
    if not seq:
        raise ValueError("empty item sequence")
    n = len(seq)
    feats: list[tuple[Feature, ...]] = [it.features for it in seq]
    head = [0] * n          # index of the first unchecked feature
    alive = [True] * n
    left = [i - 1 for i in range(n)]
    right = [i + 1 if i + 1 < n else -1 for i in range(n)]
    left[0] = -1
    alive_count = n
    cur = 0
    visited: set[int] = set()  # items seen since the last deletion
    steps: list[TraceStep] = []

    def remaining(i: int) -> tuple[Feature, ...]:
        return feats[i][head[i]:]

    def snapshot() -> tuple[tuple[str, tuple[Feature, ...]], ...]:
        return tuple(
            (seq[i].phon, remaining(i)) for i in range(n) if alive[i]
        )

    def emit(pos: int, action: str, detail: str) -> None:
        if record:
            steps.append(TraceStep(pos, action, detail, snapshot()))

    def reject(pos: int, detail: str) -> tuple[bool, list[TraceStep]]:
        emit(pos, REJECT, detail)
        return False, steps

    def delete_item(i: int) -> None:
        nonlocal alive_count
        alive[i] = False
        alive_count -= 1
        l, r = left[i], right[i]
        if l != -1:
            right[l] = r
        if r != -1:
            left[r] = l

    while True:
        if cur in visited:
            return reject(cur, "cursor loop: no feature can check between revisits")
        visited.add(cur)
        rem = remaining(cur)

        if not rem:
            # rule 5: delete the item, move left if possible, else right
            l, r = left[cur], right[cur]
            delete_item(cur)
            visited.clear()
            emit(cur, DELETE_ITEM,
                 f"{seq[cur].phon_display} is out of features; deleted")
            if alive_count == 0:
                emit(-1, ACCEPT, "empty sequence")
                return True, steps
            cur = l if l != -1 else r
            continue

        f = rem[0]

        if f.is_selector:
            # rule 1; checked-out movers (bare licensees) are transparent,
            # exactly as they are for the leftward search in rule 2b.
            r = right[cur]
            while r != -1:
                rr = remaining(r)
                if not (rr and rr[0].kind is FeatureKind.LICENSEE):
                    break
                r = right[r]
            if r == -1:
                return reject(
                    cur, f"rule 1: selector {f} with no checkable item "
                         f"to the right")
            emit(cur, SKIP_RIGHT, f"selector {f}; move right")
            cur = r
            continue

        if f.kind is FeatureKind.CAT:
            # rule 2
            if cur == 0:
                head[cur] += 1
                visited.clear()
                emit(cur, ROOT_CATEGORY, f"root category {f} deleted")
                continue
            j = left[cur]
            while j != -1:
                if any(g.kind is FeatureKind.CAT for g in remaining(j)):
                    break
                j = left[j]
            if j == -1:
                return reject(
                    cur, f"rule 2c: no item to the left still carries a category "
                         f"to project over {f}")
            g = remaining(j)[0]
            if g.is_selector and g.name == f.name:
                head[cur] += 1
                head[j] += 1
                visited.clear()
                emit(cur, CATEGORY_MATCH,
                     f"category {f} checked by {g} on {seq[j].phon_display}")
                continue
            return reject(
                cur, f"rule 2c: nearest category-bearing item "
                     f"{seq[j].phon_display} leads with {g}, not a selector "
                     f"for {f.name}")

        if f.kind is FeatureKind.LICENSEE:
            # rule 3
            l = left[cur]
            if l == -1:
                return reject(cur, f"rule 3: licensee {f} with no item to the left")
            emit(cur, LICENSEE_LEFT, f"licensee {f}; move left")
            cur = l
            continue

        # rule 4: leading licensor
        j = right[cur]
        blocker = -1
        while j != -1:
            rj = remaining(j)
            if rj and rj[0].kind is FeatureKind.LICENSEE and rj[0].name == f.name:
                break
            if blocker == -1 and any(g.kind is FeatureKind.CAT for g in rj):
                blocker = j
            j = right[j]
        if j == -1:
            return reject(cur, f"rule 4a: no item to the right leads with -{f.name}")
        if blocker != -1:
            return reject(
                cur, f"rule 4b: category-bearing item {seq[blocker].phon_display} "
                     f"intervenes before -{f.name}")
        head[cur] += 1
        head[j] += 1
        visited.clear()
        emit(cur, LICENSOR_MATCH,
             f"licensor {f} checked against -{f.name} on {seq[j].phon_display}")
