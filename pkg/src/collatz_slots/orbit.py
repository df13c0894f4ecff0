"""Collatz function, forward trajectories and orbit sets."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InvalidInputError, OrbitCapExceeded

DEFAULT_CAP = 100_000
TRIVIAL_CYCLE = frozenset({1, 2, 4})


def collatz_step(n: int) -> int:
    if n < 1:
        raise InvalidInputError(f"Collatz function is defined on n >= 1, got {n}")
    return n >> 1 if n % 2 == 0 else 3 * n + 1


@dataclass(frozen=True)
class OrbitRecord:
    """Trajectory ``c^0(n), ..., c^nu(n)`` of a tree member ``n``.

    ``odd_images`` holds ``c^(i+1)(n)`` for every odd ``c^i(n)`` with
    ``i < nu``, i.e. the value produced by each tripling step.
    """

    n: int
    steps: tuple[int, ...]
    nu: int
    kappa: int
    odd_images: tuple[int, ...]
    orbit_set: frozenset[int]

    @property
    def even_count(self) -> int:
        return self.nu - self.kappa


def trajectory(n: int, cap: int = DEFAULT_CAP) -> OrbitRecord:
    if n < 1:
        raise InvalidInputError(f"trajectory start must be >= 1, got {n}")
    if cap < 1:
        raise InvalidInputError(f"cap must be >= 1, got {cap}")
    steps = [n]
    odd_images = []
    m = n
    while m != 1:
        if len(steps) > cap:
            raise OrbitCapExceeded(n, cap)
        if m & 1:
            m = 3 * m + 1
            odd_images.append(m)
        else:
            m >>= 1
        steps.append(m)
    steps_t = tuple(steps)
    return OrbitRecord(
        n=n,
        steps=steps_t,
        nu=len(steps) - 1,
        kappa=len(odd_images),
        odd_images=tuple(odd_images),
        orbit_set=frozenset(steps_t) | TRIVIAL_CYCLE,
    )


def orbit_set_of(rec: OrbitRecord) -> frozenset[int]:
    return frozenset(rec.steps) | TRIVIAL_CYCLE


def level_and_kappa(n: int, cap: int = DEFAULT_CAP) -> tuple[int, int]:
    """Streaming ``(nu, kappa)`` without materialising the trajectory."""
    if n < 1:
        raise InvalidInputError(f"trajectory start must be >= 1, got {n}")
    nu = kappa = 0
    m = n
    while m != 1:
        if nu >= cap:
            raise OrbitCapExceeded(n, cap)
        if m & 1:
            m = 3 * m + 1
            kappa += 1
        else:
            m >>= 1
        nu += 1
    return nu, kappa
