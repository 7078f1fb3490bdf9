"""Frequent closed itemsets, frequent generators and rule bases.

Confidences are kept as :class:`fractions.Fraction` so threshold comparisons are
exact; they become decimals only when serialized.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Union

from .concepts import iter_band
from .context import FormalContext, ItemSet, indices_of, mask_of
from .errors import InvalidInputError, ParameterError

MinSupport = Union[int, float, Fraction]


def as_fraction(value) -> Fraction:
    """Exact rational for a user threshold; floats go through their shortest repr."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        return Fraction(repr(value))
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    return Fraction(str(value))


def resolve_min_supp(min_supp: MinSupport, n_objects: int) -> int:
    """Absolute support threshold.

    ``int`` values are absolute counts; ``float``/``Fraction`` values are
    relative and resolve to ``ceil(fraction * n_objects)``.
    """
    if isinstance(min_supp, bool):
        raise ParameterError("min_supp must be a number")
    if isinstance(min_supp, int):
        if min_supp < 0:
            raise ParameterError(f"absolute min_supp must be >= 0, got {min_supp}")
        return min_supp
    frac = as_fraction(min_supp)
    if not 0 < frac <= 1:
        raise ParameterError(f"relative min_supp must lie in (0, 1], got {min_supp}")
    return math.ceil(frac * n_objects)


@dataclass(frozen=True)
class MiningParams:
    min_supp: MinSupport = 1
    min_conf: Fraction = Fraction(0)
    include_empty_antecedent: bool = False

    def __post_init__(self):
        conf = as_fraction(self.min_conf)
        if not 0 <= conf <= 1:
            raise ParameterError(f"min_conf must lie in [0, 1], got {self.min_conf}")
        object.__setattr__(self, "min_conf", conf)
        # validates the relative form eagerly
        resolve_min_supp(self.min_supp, 1)

    def absolute_min_supp(self, n_objects: int) -> int:
        return resolve_min_supp(self.min_supp, n_objects)


@dataclass(frozen=True, order=True)
class SupportedItemSet:
    items: ItemSet
    support: int


@dataclass(frozen=True)
class AssociationRule:
    antecedent: ItemSet
    consequent: ItemSet
    support: int
    confidence: Fraction = field(compare=True)

    def __post_init__(self):
        if not self.consequent:
            raise InvalidInputError("rule consequent must be nonempty")
        if set(self.antecedent) & set(self.consequent):
            raise InvalidInputError("rule antecedent and consequent overlap")

    def sort_key(self):
        return (-self.confidence, -self.support, self.antecedent, self.consequent)

    def labels(self, ctx: FormalContext) -> tuple[list[str], list[str]]:
        return ctx.item_labels(self.antecedent), ctx.item_labels(self.consequent)


def _frequent_closed(ctx: FormalContext, threshold: int) -> list[tuple[int, int]]:
    """``(extent_mask, intent_mask)`` of every closed itemset with support >= threshold."""
    return list(iter_band(ctx, threshold, 0))


def _frequent_generators(ctx: FormalContext, threshold: int) -> dict[ItemSet, int]:
    """Levelwise search; returns generator -> extent mask.

    Generators form a downset, and ``P`` is a generator iff its support is
    strictly below that of each ``P - {x}``.
    """
    if ctx.n_objects < threshold:
        return {}
    cols = ctx.col_bits
    top = ctx.all_objects
    found: dict[ItemSet, int] = {(): top}
    top_count = top.bit_count()
    level: dict[ItemSet, int] = {}
    for a in range(ctx.n_attributes):
        ext = cols[a]
        c = ext.bit_count()
        if threshold <= c < top_count:
            level[(a,)] = ext
    while level:
        found.update(level)
        keys = sorted(level)
        counts = {k: v.bit_count() for k, v in level.items()}
        nxt: dict[ItemSet, int] = {}
        # join members sharing all but the last item
        groups: dict[ItemSet, list[ItemSet]] = defaultdict(list)
        for k in keys:
            groups[k[:-1]].append(k)
        for members in groups.values():
            for i, p in enumerate(members):
                ext_p = level[p]
                for q in members[i + 1:]:
                    cand = p + (q[-1],)
                    ext = ext_p & level[q]
                    c = ext.bit_count()
                    if c < threshold:
                        continue
                    ok = True
                    for drop in range(len(cand)):
                        sub = cand[:drop] + cand[drop + 1:]
                        sub_count = counts.get(sub)
                        if sub_count is None or c >= sub_count:
                            ok = False
                            break
                    if ok:
                        nxt[cand] = ext
        level = nxt
    return found


def mine_fci(ctx: FormalContext, min_supp: MinSupport) -> list[SupportedItemSet]:
    """Closed itemsets with support >= ``min_supp``, sorted by items."""
    threshold = resolve_min_supp(min_supp, ctx.n_objects)
    out = [
        SupportedItemSet(indices_of(i), e.bit_count())
        for e, i in _frequent_closed(ctx, threshold)
    ]
    out.sort()
    return out


def mine_generators(ctx: FormalContext, min_supp: MinSupport) -> list[SupportedItemSet]:
    threshold = resolve_min_supp(min_supp, ctx.n_objects)
    out = [
        SupportedItemSet(g, ext.bit_count())
        for g, ext in _frequent_generators(ctx, threshold).items()
    ]
    out.sort(key=lambda s: (len(s.items), s.items))
    return out


def informative_basis(ctx: FormalContext, params: MiningParams) -> list[AssociationRule]:
    """Approximate rules ``g -> f \\ g`` with ``g'' ⊊ f`` over frequent generators and closed sets."""
    threshold = params.absolute_min_supp(ctx.n_objects)
    generators = _frequent_generators(ctx, threshold)
    closed = _frequent_closed(ctx, threshold)
    closed.sort(key=lambda ei: -ei[0].bit_count())
    closed_counts = [e.bit_count() for e, _ in closed]

    by_closure: dict[int, list[ItemSet]] = defaultdict(list)
    for g, ext in generators.items():
        if not g and not params.include_empty_antecedent:
            continue
        by_closure[ext].append(g)

    rules = []
    min_conf = params.min_conf
    for g_ext, gens in by_closure.items():
        g_count = g_ext.bit_count()
        if g_count == 0:
            continue
        floor = max(threshold, math.ceil(min_conf * g_count))
        for (f_ext, f_int), f_count in zip(closed, closed_counts):
            if f_count < floor:
                break
            if f_count >= g_count or f_ext & ~g_ext:
                continue
            conf = Fraction(f_count, g_count)
            for g in gens:
                g_mask = mask_of(g)
                rules.append(AssociationRule(g, indices_of(f_int & ~g_mask), f_count, conf))
    rules.sort(key=AssociationRule.sort_key)
    return rules


def exact_rules(
    ctx: FormalContext, min_supp: MinSupport, include_empty_antecedent: bool = False
) -> list[AssociationRule]:
    """Implications ``g -> g'' \\ g`` for every frequent generator that is not closed."""
    threshold = resolve_min_supp(min_supp, ctx.n_objects)
    rules = []
    for g, ext in _frequent_generators(ctx, threshold).items():
        if not g and not include_empty_antecedent:
            continue
        closure = ctx.intent_mask(ext)
        extra = closure & ~mask_of(g)
        if extra:
            rules.append(AssociationRule(g, indices_of(extra), ext.bit_count(), Fraction(1)))
    rules.sort(key=AssociationRule.sort_key)
    return rules


def evaluate_rule(
    ctx: FormalContext, antecedent: Iterable[int], consequent: Iterable[int]
) -> tuple[int, Fraction | None]:
    """``(supp(A ∪ C), conf)``; confidence is ``None`` when the antecedent has no support."""
    a = ctx.items_mask(antecedent)
    c = ctx.items_mask(consequent)
    if not c:
        raise InvalidInputError("consequent must be nonempty")
    if a & c:
        raise InvalidInputError("antecedent and consequent overlap")
    ext_a = ctx.extent_mask(a)
    supp_a = ext_a.bit_count()
    supp = (ext_a & ctx.extent_mask(c)).bit_count()
    if supp_a == 0:
        return supp, None
    return supp, Fraction(supp, supp_a)
