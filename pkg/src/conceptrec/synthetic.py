"""Synthetic purchase contexts with planted market sectors.

Sectors are dense object x attribute blocks on disjoint objects and disjoint
attributes; the remaining incidences are spread uniformly over the free cells
so that the total incidence count hits the target exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .context import FormalContext
from .errors import ParameterError


@dataclass(frozen=True)
class PlantedBlock:
    objects: tuple[int, ...]
    attributes: tuple[int, ...]


def generate_planted(
    n_objects: int,
    n_attributes: int,
    incidence_target: int,
    planted_sectors: tuple[int, int, int] | None = None,
    seed: int = 0,
) -> tuple[FormalContext, list[PlantedBlock]]:
    """Like :func:`gen_synthetic_context` but also returns the planted blocks.

    ``planted_sectors`` is ``(count, objects_per_block, attributes_per_block)``.
    Randomness comes from numpy's PCG64 seeded with ``[seed, 0x5EC7]``, a stream
    independent of the fold splitter's for the same seed.
    """
    if n_objects < 0 or n_attributes < 0:
        raise ParameterError("context dimensions must be nonnegative")
    total = n_objects * n_attributes
    if not 0 <= incidence_target <= total:
        raise ParameterError(
            f"incidence target {incidence_target} infeasible for a {n_objects}x{n_attributes} context"
        )
    count, block_g, block_m = planted_sectors or (0, 0, 0)
    if min(count, block_g, block_m) < 0:
        raise ParameterError("planted sector sizes must be nonnegative")
    if count * block_g > n_objects or count * block_m > n_attributes:
        raise ParameterError("planted sectors do not fit on disjoint objects and attributes")
    planted_cells = count * block_g * block_m
    if planted_cells > incidence_target:
        raise ParameterError(
            f"planted sectors need {planted_cells} incidences, above the target {incidence_target}"
        )

    rng = np.random.default_rng([seed, 0x5EC7])
    dense = np.zeros((n_objects, n_attributes), dtype=bool)
    blocks = []
    if count:
        objs = rng.permutation(n_objects)[: count * block_g].reshape(count, block_g)
        attrs = rng.permutation(n_attributes)[: count * block_m].reshape(count, block_m)
        for o, a in zip(objs, attrs):
            dense[np.ix_(o, a)] = True
            blocks.append(PlantedBlock(tuple(sorted(int(x) for x in o)), tuple(sorted(int(x) for x in a))))

    noise = incidence_target - planted_cells
    if noise:
        free = np.flatnonzero(~dense.ravel())
        chosen = rng.choice(free, size=noise, replace=False)
        dense.ravel()[chosen] = True

    rows = [np.flatnonzero(r).tolist() for r in dense]
    width_g = len(str(max(n_objects - 1, 0)))
    width_m = len(str(max(n_attributes - 1, 0)))
    ctx = FormalContext.from_rows(
        [f"f{i:0{width_g}d}" for i in range(n_objects)],
        [f"t{j:0{width_m}d}" for j in range(n_attributes)],
        rows,
    )
    return ctx, blocks


def gen_synthetic_context(
    n_objects: int,
    n_attributes: int,
    incidence_target: int,
    planted_sectors: tuple[int, int, int] | None = None,
    seed: int = 0,
) -> FormalContext:
    return generate_planted(n_objects, n_attributes, incidence_target, planted_sectors, seed)[0]
