"""
The reference coverage grids: complete data at nominal 0.90 (table1) and
0.95 (table2), and type-I censored n=10 data at 0.95 (table3). Each has a
"-desk" variant with the smaller workload for routine runs.
"""
from __future__ import annotations

from itertools import product
from typing import Callable

from llgpq.study import (
    DEFAULT_REPLICATES,
    DESK_BOOT_REPS,
    DESK_GPQ_DRAWS,
    DESK_REPLICATES,
    ScenarioConfig,
)
from llgpq.util import Seed

SIZES = (10, 20)
TIMES = (1.0, 2.0)
SHAPES = (2.0, 5.0)
SCALES = (1.0, 2.0)
CENSORING = (0.2, 0.5)

# (n, t, alpha, beta, censoring)
Cell = tuple[int, float, float, float, float]

_COMPLETE_CELLS: list[Cell] = [
    (n, t, a, b, 0.0) for n, t, a, b in product(SIZES, TIMES, SHAPES, SCALES)
]
_CENSORED_CELLS: list[Cell] = [
    (10, t, a, b, c) for t, a, b, c in product(TIMES, SHAPES, SCALES, CENSORING)
]

# LSE-GPQ, PB, AI coverage per cell, in cell order
_TABLE1 = [
    (0.901, 0.857, 0.841),
    (0.907, 0.846, 0.815),
    (0.901, 0.857, 0.841),
    (0.904, 0.838, 0.757),
    (0.914, 0.834, 0.802),
    (0.901, 0.857, 0.841),
    (0.911, 0.818, 0.735),
    (0.901, 0.857, 0.841),
    (0.903, 0.873, 0.867),
    (0.902, 0.867, 0.853),
    (0.889, 0.845, 0.722),
    (0.886, 0.844, 0.809),
    (0.901, 0.873, 0.862),
    (0.903, 0.873, 0.867),
    (0.894, 0.853, 0.809),
    (0.903, 0.873, 0.867),
]
_TABLE2 = [
    (0.943, 0.912, 0.893),
    (0.953, 0.904, 0.862),
    (0.943, 0.912, 0.893),
    (0.960, 0.881, 0.660),
    (0.952, 0.897, 0.846),
    (0.943, 0.912, 0.893),
    (0.957, 0.878, 0.766),
    (0.943, 0.912, 0.893),
    (0.947, 0.930, 0.922),
    (0.955, 0.923, 0.907),
    (0.947, 0.930, 0.922),
    (0.944, 0.907, 0.836),
    (0.950, 0.919, 0.897),
    (0.947, 0.930, 0.922),
    (0.943, 0.907, 0.844),
    (0.947, 0.930, 0.922),
]
_TABLE3 = [
    (0.941, 0.911, 0.916),
    (0.948, 0.927, 0.907),
    (0.952, 0.939, 0.909),
    (0.937, 0.918, 0.904),
    (0.944, 0.917, 0.912),
    (0.945, 0.915, 0.893),
    (0.947, 0.931, 0.842),
    (0.953, 0.894, 0.769),
    (0.941, 0.915, 0.896),
    (0.939, 0.935, 0.869),
    (0.949, 0.930, 0.927),
    (0.937, 0.918, 0.904),
    (0.946, 0.913, 0.829),
    (0.940, 0.945, 0.825),
    (0.950, 0.935, 0.935),
    (0.941, 0.901, 0.878),
]

REFERENCE_COVERAGE: dict[str, dict[Cell, tuple[float, float, float]]] = {
    "table1": dict(zip(_COMPLETE_CELLS, _TABLE1)),
    "table2": dict(zip(_COMPLETE_CELLS, _TABLE2)),
    "table3": dict(zip(_CENSORED_CELLS, _TABLE3)),
}

_LEVELS = {"table1": 0.90, "table2": 0.95, "table3": 0.95}


def cell_key(config: ScenarioConfig) -> Cell:
    return (
        config.n,
        config.t,
        config.alpha,
        config.beta,
        config.censoring_prop,
    )


def _grid(table: str, desk: bool) -> Callable[[int], list[ScenarioConfig]]:
    cells = list(REFERENCE_COVERAGE[table])
    workload = (
        dict(
            replicates=DESK_REPLICATES,
            gpq_draws=DESK_GPQ_DRAWS,
            boot_reps=DESK_BOOT_REPS,
        )
        if desk
        else dict(replicates=DEFAULT_REPLICATES)
    )

    def build(seed: int) -> list[ScenarioConfig]:
        base = Seed(seed)
        return [
            ScenarioConfig(
                n=n,
                t=t,
                alpha=a,
                beta=b,
                level=_LEVELS[table],
                censoring_prop=c,
                seed=base.spawn(ix),
                **workload,  # type: ignore
            )
            for ix, (n, t, a, b, c) in enumerate(cells)
        ]

    return build


PRESETS: dict[str, Callable[[int], list[ScenarioConfig]]] = {
    f"{table}{suffix}": _grid(table, suffix == "-desk")
    for table in REFERENCE_COVERAGE
    for suffix in ("", "-desk")
}


def preset(name: str, seed: int) -> list[ScenarioConfig]:
    """
    Scenario grid [name] with cell i seeded by Seed(seed).spawn(i).
    """
    try:
        return PRESETS[name](seed)
    except KeyError:
        raise ValueError(
            f"Unknown preset {name}; choose from {sorted(PRESETS)}"
        ) from None
