"""Search modes and removal-set enumeration shared by the checkers."""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Iterator

import numpy as np

DEFAULT_BUDGET = 1 << 24
DEFAULT_TRIALS = 1000


class BudgetExceeded(RuntimeError):
    """An exhaustive search would exceed the configured budget.

    Never silently downgraded to sampling.
    """

    def __init__(self, what: str, needed: int, budget: int):
        super().__init__(f"{what}: {needed} candidates exceed budget {budget}")
        self.needed = needed
        self.budget = budget


@dataclass(frozen=True)
class SearchMode:
    mode: str = "exhaustive"
    trials: int = DEFAULT_TRIALS
    seed: int | None = None
    budget: int = DEFAULT_BUDGET
    # "lex" or "revlex"; both cover the same removal sets
    order: str = "lex"

    def __post_init__(self):
        if self.mode not in ("exhaustive", "sampled"):
            raise ValueError(f"unknown search mode {self.mode!r}")
        if self.order not in ("lex", "revlex"):
            raise ValueError(f"unknown enumeration order {self.order!r}")
        if self.mode == "sampled":
            if self.trials < 1:
                raise ValueError("sampled mode needs trials >= 1")
            if self.seed is None:
                raise ValueError("sampled mode needs an explicit seed")

    @classmethod
    def exhaustive(cls, budget: int = DEFAULT_BUDGET, order: str = "lex") -> "SearchMode":
        return cls("exhaustive", budget=budget, order=order)

    @classmethod
    def sampled(cls, trials: int = DEFAULT_TRIALS, seed: int = 0, budget: int = DEFAULT_BUDGET) -> "SearchMode":
        return cls("sampled", trials=trials, seed=seed, budget=budget)

    @property
    def is_exhaustive(self) -> bool:
        return self.mode == "exhaustive"

    def to_dict(self) -> dict:
        d = {"mode": self.mode}
        if self.mode == "sampled":
            d.update(trials=self.trials, seed=self.seed)
        else:
            d["budget"] = self.budget
        return d


def subsets(
    n_items: int, size: int, mode: SearchMode, what: str = "removal sets", stream: int = 0
) -> Iterator[tuple[int, ...]]:
    """Removal sets of exactly ``size`` items out of ``range(n_items)``.

    Exhaustive mode yields all of them in lexicographic order and refuses up
    front when ``C(n_items, size)`` exceeds the budget. Sampled mode draws
    ``mode.trials`` uniform subsets (sorted tuples) from a PCG64 generator
    seeded with ``(mode.seed, stream)``.
    """
    size = min(size, n_items)
    if mode.is_exhaustive:
        total = math.comb(n_items, size)
        if total > mode.budget:
            raise BudgetExceeded(what, total, mode.budget)
        if mode.order == "lex":
            yield from combinations(range(n_items), size)
        else:
            top = n_items - 1
            for c in combinations(range(n_items), size):
                yield tuple(top - x for x in reversed(c))
        return
    rng = np.random.default_rng([mode.seed, stream])
    for _ in range(mode.trials):
        pick = rng.choice(n_items, size=size, replace=False) if size else []
        yield tuple(sorted(int(x) for x in pick))


def subset_count(n_items: int, size: int, mode: SearchMode) -> int:
    size = min(size, n_items)
    return math.comb(n_items, size) if mode.is_exhaustive else mode.trials
