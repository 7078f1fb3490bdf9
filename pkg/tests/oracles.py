"""Brute-force reference implementations.

Everything here works on plain Python sets built from ``ctx.rows`` and
enumerates all attribute subsets, so it shares no code path with the miners.
"""

from fractions import Fraction
from itertools import combinations

import numpy as np

from conceptrec import FormalContext


def random_context(rng: np.random.Generator, max_objects: int, max_attributes: int) -> FormalContext:
    n = int(rng.integers(0, max_objects + 1))
    m = int(rng.integers(0, max_attributes + 1))
    density = rng.uniform(0.1, 0.9)
    rows = [[a for a in range(m) if rng.random() < density] for _ in range(n)]
    return FormalContext.from_rows([f"g{i}" for i in range(n)], [f"m{j}" for j in range(m)], rows)


def _rows(ctx):
    return [set(r) for r in ctx.rows]


def extent(ctx, items) -> frozenset:
    items = set(items)
    return frozenset(g for g, row in enumerate(_rows(ctx)) if items <= row)


def intent(ctx, objects) -> frozenset:
    rows = _rows(ctx)
    common = set(range(ctx.n_attributes))
    for g in objects:
        common &= rows[g]
    return frozenset(common)


def all_itemsets(m):
    for k in range(m + 1):
        yield from combinations(range(m), k)


def brute_concepts(ctx):
    """Set of (extent, intent) pairs obtained by closing every attribute subset."""
    out = set()
    for items in all_itemsets(ctx.n_attributes):
        ext = extent(ctx, items)
        out.add((tuple(sorted(ext)), tuple(sorted(intent(ctx, ext)))))
    return out


def supports(ctx):
    return {items: len(extent(ctx, items)) for items in all_itemsets(ctx.n_attributes)}


def brute_fci(ctx, threshold):
    supp = supports(ctx)
    out = set()
    for items, s in supp.items():
        if s < threshold:
            continue
        rest = [a for a in range(ctx.n_attributes) if a not in items]
        if all(supp[tuple(sorted(items + (a,)))] < s for a in rest):
            out.add((items, s))
    return out


def brute_generators(ctx, threshold):
    supp = supports(ctx)
    out = set()
    for items, s in supp.items():
        if s < threshold:
            continue
        proper = (sub for k in range(len(items)) for sub in combinations(items, k))
        if all(supp[sub] != s for sub in proper):
            out.add((items, s))
    return out


def closure(ctx, items):
    return tuple(sorted(intent(ctx, extent(ctx, items))))


def brute_informative_basis(ctx, threshold, min_conf, include_empty=False):
    fci = brute_fci(ctx, threshold)
    out = set()
    for g, sg in brute_generators(ctx, threshold):
        if not g and not include_empty:
            continue
        cg = set(closure(ctx, g))
        for f, sf in fci:
            if cg < set(f) and sg > 0:
                conf = Fraction(sf, sg)
                if sf >= threshold and conf >= min_conf:
                    out.add((g, tuple(a for a in f if a not in g), sf, conf))
    return out


def brute_exact_rules(ctx, threshold, include_empty=False):
    out = set()
    for g, sg in brute_generators(ctx, threshold):
        if not g and not include_empty:
            continue
        c = closure(ctx, g)
        if c != g:
            out.add((g, tuple(a for a in c if a not in g), sg, Fraction(1)))
    return out


def rule_tuples(rules):
    return {(r.antecedent, r.consequent, r.support, r.confidence) for r in rules}
