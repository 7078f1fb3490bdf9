"""Band mining: all formal concepts with ``|extent| >= n`` and ``|intent| >= m``.

The search is Close-by-One over attributes in ascending order. Each node carries
the attributes that could still enter the intent of some descendant (those whose
column meets the current extent in at least ``min_extent`` objects). That list
drives three things:

* closure of a child is computed only over the list, since any attribute in the
  child's intent is either already in the parent intent or in the list;
* a branch is cut as soon as its extent drops below ``min_extent``;
* a branch is cut when ``|intent| + |list|`` cannot reach ``min_intent``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .context import FormalContext, ItemSet, ObjectSet, indices_of
from .errors import ParameterError


@dataclass(frozen=True, order=True)
class FormalConcept:
    intent: ItemSet
    extent: ObjectSet

    def __repr__(self) -> str:
        return f"FormalConcept(extent={self.extent}, intent={self.intent})"


@dataclass(frozen=True)
class BandConstraints:
    min_extent: int = 0
    min_intent: int = 0

    def __post_init__(self):
        if self.min_extent < 0 or self.min_intent < 0:
            raise ParameterError("band constraints must be nonnegative")


def iter_band(ctx: FormalContext, min_extent: int = 0, min_intent: int = 0) -> Iterator[tuple[int, int]]:
    """Yield ``(extent_mask, intent_mask)`` for every concept in the band, unordered."""
    if min_extent < 0 or min_intent < 0:
        raise ParameterError("band constraints must be nonnegative")
    if ctx.n_objects < min_extent:
        return
    cols = ctx.col_bits
    top_extent = ctx.all_objects
    top_intent = ctx.intent_mask(top_extent)
    candidates = [
        a for a in range(ctx.n_attributes)
        if not top_intent >> a & 1 and cols[a].bit_count() >= min_extent
    ]
    stack = [(top_extent, top_intent, 0, candidates)]
    while stack:
        extent, intent, start, cands = stack.pop()
        n_intent = intent.bit_count()
        if n_intent >= min_intent:
            yield extent, intent
        if n_intent + len(cands) < min_intent:
            continue
        children = []
        for j in cands:
            if j < start:
                continue
            child_extent = extent & cols[j]
            # cands guarantees |child_extent| >= min_extent
            new = 0
            for a in cands:
                if child_extent & cols[a] == child_extent:
                    new |= 1 << a
            # canonicity: nothing below j may be added
            if new & ((1 << j) - 1):
                continue
            child_intent = intent | new
            child_cands = [
                a for a in cands
                if not new >> a & 1 and (child_extent & cols[a]).bit_count() >= min_extent
            ]
            children.append((child_extent, child_intent, j + 1, child_cands))
        stack.extend(reversed(children))


def mine_concepts(ctx: FormalContext, constraints: BandConstraints | None = None) -> list[FormalConcept]:
    """Concepts satisfying the band, sorted by intent index sequence."""
    c = constraints or BandConstraints()
    concepts = [
        FormalConcept(indices_of(i), indices_of(e))
        for e, i in iter_band(ctx, c.min_extent, c.min_intent)
    ]
    concepts.sort()
    return concepts


def count_band(ctx: FormalContext, constraints: BandConstraints | None = None) -> int:
    c = constraints or BandConstraints()
    return sum(1 for _ in iter_band(ctx, c.min_extent, c.min_intent))
