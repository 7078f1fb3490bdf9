"""Held-out validation of mined rules.

Objects are split once into ``k`` random parts; each part serves once as the
test set while rules are mined on the other ``k - 1`` parts and re-scored on it.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

import numpy as np

from .context import FormalContext, ObjectSet, subcontext
from .errors import ParameterError
from .rules import AssociationRule, MiningParams, exact_rules, informative_basis

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class SplitSpec:
    k: int = 10
    seed: int = 0


@dataclass(frozen=True)
class FoldReport:
    fold_index: int
    n_rules: int
    n_rules_test_supp_pos: int
    average_conf: Fraction | None
    n_rules_conf_ge_half: int
    average_conf_restricted: Fraction | None
    # sum of defined test confidences over every rule, not only supported ones
    average_conf_all_rules: Fraction | None
    n_train: int
    n_test: int


class CrossValidation(NamedTuple):
    reports: list[FoldReport]
    average_conf: Fraction | None


def split_folds(ctx: FormalContext, spec: SplitSpec) -> list[ObjectSet]:
    """Random partition of the objects into ``k`` parts of near-equal size.

    Uses numpy's PCG64 seeded with ``[spec.seed, 0xF01D]``; each part is sorted.
    """
    n = ctx.n_objects
    if spec.k < 2 or spec.k > n:
        raise ParameterError(f"need 2 <= k <= {n} objects, got k={spec.k}")
    rng = np.random.default_rng([spec.seed, 0xF01D])
    order = rng.permutation(n)
    return [tuple(sorted(int(g) for g in part)) for part in np.array_split(order, spec.k)]


def test_confidence(rule: AssociationRule, test_ctx: FormalContext) -> Fraction | None:
    ante = test_ctx.extent_mask(test_ctx.items_mask(rule.antecedent))
    base = ante.bit_count()
    if base == 0:
        return None
    both = ante & test_ctx.extent_mask(test_ctx.items_mask(rule.consequent))
    return Fraction(both.bit_count(), base)


test_confidence.__test__ = False  # keep pytest from collecting the imported name


def _mean(values: Sequence[Fraction]) -> Fraction | None:
    return Fraction(sum(values)) / len(values) if values else None


def fold_report(
    fold_index: int, rules: Sequence[AssociationRule], test_ctx: FormalContext, n_train: int
) -> FoldReport:
    confs = [test_confidence(r, test_ctx) for r in rules]
    defined = [c for c in confs if c is not None]
    restricted = [c for c in defined if c >= HALF]
    return FoldReport(
        fold_index=fold_index,
        n_rules=len(rules),
        n_rules_test_supp_pos=len(defined),
        average_conf=_mean(defined),
        n_rules_conf_ge_half=len(restricted),
        average_conf_restricted=_mean(restricted),
        average_conf_all_rules=Fraction(sum(defined)) / len(rules) if rules else None,
        n_train=n_train,
        n_test=test_ctx.n_objects,
    )


def mine_rule_set(ctx: FormalContext, params: MiningParams, include_exact: bool = False) -> list[AssociationRule]:
    rules = informative_basis(ctx, params)
    if include_exact:
        rules += exact_rules(ctx, params.min_supp, params.include_empty_antecedent)
        rules.sort(key=AssociationRule.sort_key)
    return rules


def _run_fold(args) -> FoldReport:
    ctx, i, train, test, params, include_exact = args
    train_ctx = subcontext(ctx, train)
    rules = mine_rule_set(train_ctx, params, include_exact)
    return fold_report(i, rules, subcontext(ctx, test), train_ctx.n_objects)


def cross_validate(
    ctx: FormalContext,
    params: MiningParams,
    spec: SplitSpec | None = None,
    include_exact: bool = False,
    workers: int = 1,
) -> CrossValidation:
    """Per-fold reports and the mean of the folds' ``average_conf``.

    Folds whose rules never fire on the test part have no ``average_conf`` and
    are left out of the overall mean.
    """
    spec = spec or SplitSpec()
    folds = split_folds(ctx, spec)
    jobs = []
    for i, test in enumerate(folds):
        if not test:
            raise ParameterError(f"fold {i} has no test objects")
        train = tuple(g for j, part in enumerate(folds) if j != i for g in part)
        jobs.append((ctx, i, train, test, params, include_exact))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            reports = list(pool.map(_run_fold, jobs))
    else:
        reports = [_run_fold(job) for job in jobs]
    return CrossValidation(reports, _mean([r.average_conf for r in reports if r.average_conf is not None]))


def overall_restricted(reports: Sequence[FoldReport]) -> Fraction | None:
    return _mean([r.average_conf_restricted for r in reports if r.average_conf_restricted is not None])
