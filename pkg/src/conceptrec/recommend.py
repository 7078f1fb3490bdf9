"""Top-N term recommendations from association rules.

A rule fires for a firm when the firm has bought every item of its antecedent.
Each consequent item the firm has not bought yet is scored by the largest
confidence among the rules that predict it.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .context import FormalContext, mask_of
from .errors import InvalidInputError
from .rules import AssociationRule


@dataclass(frozen=True)
class Recommendation:
    firm: int
    item: int
    score: Fraction
    support_rules: int
    rule_support: int = 0


def _prepared(rules: Sequence[AssociationRule]) -> list[tuple[int, int, Fraction, int]]:
    return [(mask_of(r.antecedent), mask_of(r.consequent), r.confidence, r.support) for r in rules]


def _recommend(ctx: FormalContext, prepared, firm: int, top_n: int | None) -> list[Recommendation]:
    bought = ctx.row_bits[firm]
    best: dict[int, list] = {}
    for ante, cons, conf, supp in prepared:
        if ante & ~bought:
            continue
        fresh = cons & ~bought
        while fresh:
            low = fresh & -fresh
            item = low.bit_length() - 1
            fresh ^= low
            entry = best.get(item)
            if entry is None:
                best[item] = [conf, supp, 1]
            else:
                entry[2] += 1
                if (conf, supp) > (entry[0], entry[1]):
                    entry[0], entry[1] = conf, supp
    ranked = sorted(best.items(), key=lambda kv: (-kv[1][0], -kv[1][1], kv[0]))
    if top_n is not None:
        ranked = ranked[:top_n]
    return [Recommendation(firm, item, conf, count, supp) for item, (conf, supp, count) in ranked]


def recommend(
    ctx: FormalContext,
    rules: Sequence[AssociationRule],
    firm: int,
    top_n: int | None = None,
) -> list[Recommendation]:
    """Ranked unbought items for ``firm``; ``top_n=None`` returns all of them.

    Ties on score go to the higher rule support, then the lower item index.
    """
    if not isinstance(firm, int) or not 0 <= firm < ctx.n_objects:
        raise InvalidInputError(f"firm index {firm!r} out of range")
    if top_n is not None and top_n < 1:
        raise InvalidInputError("top_n must be positive")
    return _recommend(ctx, _prepared(rules), firm, top_n)


def recommend_all(
    ctx: FormalContext, rules: Sequence[AssociationRule], top_n: int | None = None
) -> dict[int, list[Recommendation]]:
    if top_n is not None and top_n < 1:
        raise InvalidInputError("top_n must be positive")
    prepared = _prepared(rules)
    return {g: _recommend(ctx, prepared, g, top_n) for g in range(ctx.n_objects)}
