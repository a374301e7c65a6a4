"""Seeded, splittable random instance generation.

Every trial gets its own substream derived from (seed, cell key, trial
index), so cells are reproducible independently and in any order.
"""

from __future__ import annotations

import numpy as np

from .modular import ExponentVector, PrimeContext
from .sums import Box, PhaseWeights, SumSpec, TableWeights, UnitWeights, WeightSystem

_MASK = (1 << 64) - 1


def substream(seed: int, *key: int) -> np.random.Generator:
    """Independent generator for one trial, derived from seed and cell key."""
    return np.random.default_rng([seed & _MASK, *[k & _MASK for k in key]])


def draw_corners(rng: np.random.Generator, p: int, n: int) -> tuple[int, ...]:
    return tuple(int(v) for v in rng.integers(0, p, size=n))


def draw_exponents(
    rng: np.random.Generator, pool: list[int], n: int
) -> ExponentVector:
    return ExponentVector(tuple(int(rng.choice(pool)) for _ in range(n)))


def draw_coprime_lambda(rng: np.random.Generator, p: int) -> int:
    return int(rng.integers(1, p))


def draw_weights(
    rng: np.random.Generator, kind: str, p: int, n: int, h: int
) -> WeightSystem:
    if kind == "unit":
        return UnitWeights()
    if kind == "phase":
        return PhaseWeights(tuple(int(v) for v in rng.integers(0, p, size=n)))
    if kind == "table":
        tables = []
        for _ in range(n):
            mag = rng.uniform(0.0, 1.0, size=h)
            arg = rng.uniform(0.0, 2 * np.pi, size=h)
            tables.append(mag * np.exp(1j * arg))
        return TableWeights(tables)
    raise ValueError(f"unknown weight kind {kind!r}")


def draw_spec(
    rng: np.random.Generator,
    ctx: PrimeContext,
    n: int,
    h: int,
    pool: list[int],
    weight_kind: str = "unit",
    origin_box: bool = False,
    lam: int | None = None,
) -> SumSpec:
    """One random sum instance; origin_box forces all corners to 0."""
    p = ctx.p
    corners = (0,) * n if origin_box else draw_corners(rng, p, n)
    e = draw_exponents(rng, pool, n)
    weights = draw_weights(rng, weight_kind, p, n, h)
    if lam is None:
        lam = draw_coprime_lambda(rng, p)
    return SumSpec(ctx=ctx, box=Box(corners, h), e=e, weights=weights, lam=lam)
