"""Level sets of the Collatz tree, generated backwards from ``{1}``."""

from __future__ import annotations

import heapq
import os
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterator

from .errors import CollatzError, IntegrityError, InvalidInputError
from .orbit import DEFAULT_CAP, level_and_kappa

CACHE_ENV = "COLLATZ_SLOTS_CACHE_DIR"


@dataclass(frozen=True)
class LevelSet:
    nu: int
    elements: tuple[int, ...]

    def __post_init__(self):
        if self.nu < 0:
            raise InvalidInputError(f"level index must be >= 0, got {self.nu}")

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def validate(self) -> None:
        els = self.elements
        if not els:
            raise IntegrityError(f"level {self.nu} is empty")
        for a, b in zip(els, els[1:]):
            if a >= b:
                raise IntegrityError(f"level {self.nu} not strictly ascending at {a}, {b}")
        if els[-1] != 2**self.nu:
            raise IntegrityError(f"level {self.nu} maximum is {els[-1]}, expected 2**{self.nu}")


L0 = LevelSet(0, (1,))


def spawns_odd(n: int) -> bool:
    """True when ``(n - 1) / 3`` is an odd tree predecessor of ``n``."""
    return n > 4 and n % 6 == 4


def next_level(level: LevelSet) -> LevelSet:
    doubles = [2 * n for n in level.elements]
    odds = [(n - 1) // 3 for n in level.elements if spawns_odd(n)]
    # Both branches are ascending already; doubles are even and the other
    # branch is odd, so the union is disjoint.
    merged = tuple(heapq.merge(doubles, odds))
    for a, b in zip(merged, merged[1:]):
        if a == b:
            raise IntegrityError(f"branches of level {level.nu + 1} overlap at {a}")
    return LevelSet(level.nu + 1, merged)


def iter_levels(nu_max: int) -> Iterator[LevelSet]:
    if nu_max < 0:
        raise InvalidInputError(f"nu_max must be >= 0, got {nu_max}")
    level = L0
    yield level
    for _ in range(nu_max):
        level = next_level(level)
        yield level


class SinkError(CollatzError):
    def __init__(self, nu: int, cause: BaseException):
        super().__init__(f"level sink failed at nu={nu}: {cause}")
        self.nu = nu
        self.__cause__ = cause


@dataclass
class GenerationSummary:
    nu_max: int
    cardinalities: list[int] = field(default_factory=list)


def generate_levels(nu_max: int, sink: Callable[[LevelSet], object] | None = None) -> GenerationSummary:
    """Emit ``L_0 .. L_nu_max`` to ``sink`` in order.

    Only the current level and its successor are alive at any time.
    """
    summary = GenerationSummary(nu_max)
    for level in iter_levels(nu_max):
        summary.cardinalities.append(len(level))
        if sink is not None:
            try:
                sink(level)
            except Exception as exc:
                raise SinkError(level.nu, exc) from exc
    return summary


def level_set(nu: int) -> LevelSet:
    """``L_nu``, read from the on-disk cache when ``COLLATZ_SLOTS_CACHE_DIR`` is set."""
    cache = os.environ.get(CACHE_ENV)
    if not cache:
        *_, last = iter_levels(nu)
        return last
    from .io import read_levelset, write_levelset

    path = Path(cache) / f"L{nu}.txt"
    if path.exists():
        return read_levelset(path)
    Path(cache).mkdir(parents=True, exist_ok=True)
    *_, last = iter_levels(nu)
    write_levelset(last, path)
    return last


@dataclass(frozen=True)
class LevelStats:
    count: int
    min: int
    max: int
    kappa_histogram: dict[int, int]


def level_stats(level: LevelSet, cap: int = DEFAULT_CAP) -> LevelStats:
    hist = Counter(level_and_kappa(e, cap)[1] for e in level.elements)
    return LevelStats(
        count=len(level),
        min=level.elements[0],
        max=level.elements[-1],
        kappa_histogram=dict(sorted(hist.items())),
    )
