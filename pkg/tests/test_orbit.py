import pytest
from hypothesis import given, strategies as st

from collatz_slots import OrbitCapExceeded, InvalidInputError, collatz_step, level_and_kappa, orbit_set_of, trajectory

from oracles import orbit_by_simulation


@pytest.mark.parametrize("n, expected", [(1, 4), (16, 8), (5, 16)])
def test_collatz_step(n, expected):
    assert collatz_step(n) == expected


def test_collatz_step_rejects_zero():
    with pytest.raises(InvalidInputError):
        collatz_step(0)


def test_trajectory_of_one():
    rec = trajectory(1)
    assert rec.steps == (1,)
    assert (rec.nu, rec.kappa) == (0, 0)
    assert rec.orbit_set == {1, 2, 4}


def test_trajectory_of_five():
    rec = trajectory(5)
    assert rec.steps == (5, 16, 8, 4, 2, 1)
    assert (rec.nu, rec.kappa) == (5, 1)
    assert rec.odd_images == (16,)


def test_trajectory_of_27():
    rec = trajectory(27)
    assert (rec.nu, rec.kappa) == (111, 41)


def test_cap_exceeded():
    with pytest.raises(OrbitCapExceeded) as info:
        trajectory(27, cap=110)
    assert info.value.n == 27
    assert trajectory(27, cap=111).nu == 111
    with pytest.raises(OrbitCapExceeded):
        level_and_kappa(27, cap=110)


@pytest.mark.parametrize("n, expected", [(1, {1, 4, 2}), (5, {5, 16, 8, 4, 2, 1}), (2, {2, 1, 4})])
def test_orbit_set_of(n, expected):
    assert orbit_set_of(trajectory(n)) == expected


@given(st.integers(min_value=1, max_value=10**12))
def test_trajectory_invariants(n):
    rec = trajectory(n)
    s = rec.steps
    assert s[0] == n and s[rec.nu] == 1 and 1 not in s[:-1]
    assert all(s[j + 1] == collatz_step(s[j]) for j in range(rec.nu))
    assert len(set(s)) == len(s)
    assert rec.kappa == sum(1 for x in s[:-1] if x % 2) == len(rec.odd_images)
    assert rec.nu == rec.kappa + rec.even_count
    assert all(k % 6 == 4 for k in rec.odd_images)
    assert level_and_kappa(n) == (rec.nu, rec.kappa)


@given(st.integers(min_value=1, max_value=10**6))
def test_orbit_set_matches_simulation(n):
    assert orbit_set_of(trajectory(n)) == orbit_by_simulation(n)
