from __future__ import annotations

import numpy as np
import pytest

from mecsched.catalog import CacheConfig, ContentCatalog
from mecsched.dynamics import (
    ACTION_FIRST_LOCAL,
    ACTION_FIRST_MEC,
    ACTION_IDLE,
    ACTION_SPLIT_LOCAL_MEC,
    ACTION_SPLIT_MEC_LOCAL,
    ACTIONS,
    Action,
    SystemParams,
    SystemState,
    mec_bits,
    slots_local,
    slots_mec,
    step,
    transmitted_bits,
    uncached_distinct_bits,
)
from mecsched.errors import ContractViolation
from mecsched.workload import Task


def _task(contents, size_bits=5e6, slot=0) -> Task:
    arr = np.asarray(contents, dtype=np.int64)
    return Task(id=slot, arrival_slot=slot, contents=arr, total_bits=size_bits * len(arr))


@pytest.fixture(scope="module")
def catalog() -> ContentCatalog:
    return ContentCatalog.zipf(1000, 0.8, 5e6)


@pytest.fixture(scope="module")
def cache(catalog) -> CacheConfig:
    return CacheConfig.for_catalog(catalog, 50)


def _params(**kw) -> SystemParams:
    base = dict(slot_seconds=0.2, cycles_per_bit=1.0, f_local_hz=1e9, f_mec_hz=1e10, rate_bps=5e8)
    base.update(kw)
    return SystemParams(**base)


def test_action_schedule_counts() -> None:
    assert ACTION_IDLE.scheduled == 0
    assert ACTION_FIRST_LOCAL.scheduled == 1
    assert ACTION_FIRST_MEC.scheduled == 1
    assert ACTION_SPLIT_LOCAL_MEC.scheduled == 2
    assert ACTION_SPLIT_MEC_LOCAL.scheduled == 2
    assert ACTIONS == (
        ACTION_IDLE,
        ACTION_FIRST_LOCAL,
        ACTION_FIRST_MEC,
        ACTION_SPLIT_LOCAL_MEC,
        ACTION_SPLIT_MEC_LOCAL,
    )


def test_action_tuples_match_canonical_encoding() -> None:
    assert tuple(ACTION_SPLIT_LOCAL_MEC) == (1, 0, 0, 1)
    assert tuple(ACTION_SPLIT_MEC_LOCAL) == (0, 1, 1, 0)
    assert Action(1, 0, 0, 0).uses_local and not Action(1, 0, 0, 0).uses_mec
    assert Action(0, 1, 1, 0).uses_local and Action(0, 1, 1, 0).uses_mec


def test_params_validation() -> None:
    with pytest.raises(ValueError):
        _params(rate_bps=0)
    with pytest.raises(ValueError):
        _params(slot_seconds=-1)


def test_uncached_distinct_counts_each_rank_once(catalog, cache) -> None:
    task = _task([1, 2, 51, 51, 52])
    assert uncached_distinct_bits(task, cache, catalog) == 2 * 5e6
    # memoised per capacity
    assert task._distinct_uncached[50] == 2
    empty = CacheConfig.for_catalog(catalog, 0)
    assert uncached_distinct_bits(task, empty, catalog) == 4 * 5e6


def test_uncached_distinct_fully_cached(catalog, cache) -> None:
    task = _task([1, 5, 50, 50])
    assert uncached_distinct_bits(task, cache, catalog) == 0.0


def test_mec_bits_is_full_task(catalog) -> None:
    task = _task([1, 2, 3, 4])
    assert mec_bits(task) == 20e6


def test_transmitted_bits_per_action(catalog, cache) -> None:
    first = _task([51, 51, 52])  # 2 distinct uncached, full 15 Mbit
    second = _task([1, 2])  # fully cached, full 10 Mbit
    args = (first, second, cache, catalog)
    assert transmitted_bits(ACTION_IDLE, *args) == 0.0
    assert transmitted_bits(ACTION_FIRST_LOCAL, *args) == 10e6
    assert transmitted_bits(ACTION_FIRST_MEC, *args) == 15e6
    assert transmitted_bits(ACTION_SPLIT_LOCAL_MEC, *args) == 10e6 + 10e6
    assert transmitted_bits(ACTION_SPLIT_MEC_LOCAL, *args) == 15e6 + 0.0


def test_slots_mec_reference_task(catalog) -> None:
    # 50 contents, 250 Mbit: compute 0.125 slots, uplink 2.5 slots.
    task = _task(list(range(1, 51)))
    assert slots_mec(task, _params()) == 3


def test_slots_mec_fast_rate(catalog) -> None:
    task = _task(list(range(1, 51)))
    assert slots_mec(task, _params(rate_bps=1e10)) == 1


def test_slots_local_fully_cached(catalog, cache) -> None:
    # 250 Mbit task, nothing to fetch: 1.25 compute slots, ceil 2.
    task = _task(list(np.arange(1, 51) % 50 + 1))
    assert uncached_distinct_bits(task, cache, catalog) == 0.0
    assert slots_local(task, cache, catalog, _params()) == 2


def test_slots_local_with_fetch(catalog, cache) -> None:
    # 50 contents, 20 distinct uncached (100 Mbit): 1.25 + 1.0 -> 3.
    contents = list(range(1, 31)) + list(range(51, 71))
    task = _task(contents)
    assert uncached_distinct_bits(task, cache, catalog) == 100e6
    assert slots_local(task, cache, catalog, _params()) == 3


def test_slot_count_integer_boundary(catalog, cache) -> None:
    # compute 40 contents * 5 Mbit = 200 Mbit -> exactly 1.0 slot at 1 GHz;
    # fetch 20 distinct uncached = 100 Mbit -> exactly 1.0 slot; total exactly 2.
    contents = list(range(1, 21)) + list(range(51, 71))
    task = _task(contents)
    assert task.total_bits == 200e6
    assert uncached_distinct_bits(task, cache, catalog) == 100e6
    assert slots_local(task, cache, catalog, _params()) == 2
    # any extra work tips it to 3
    bigger = _task(contents + [71])
    assert slots_local(bigger, cache, catalog, _params()) == 3


def test_slots_always_at_least_one(catalog, cache) -> None:
    tiny = _task([1])
    fast = _params(f_local_hz=1e12, f_mec_hz=1e12, rate_bps=1e12)
    assert slots_local(tiny, cache, catalog, fast) == 1
    assert slots_mec(tiny, fast) == 1


def test_step_assignment_and_completion_timing(catalog, cache) -> None:
    # N_local = 3 for this task: busy goes 2, 1, 0; completion at t+2.
    params = _params()
    contents = list(range(1, 31)) + list(range(51, 71))
    task = _task(contents)
    state = SystemState.empty()
    state.queue.append(task)

    _, done, tx = step(state, ACTION_FIRST_LOCAL, task, None, None, params, cache, catalog)
    assert done == []
    assert state.busy_local == 2
    assert tx == 100e6
    assert len(state.queue) == 0
    assert state.slot == 1

    _, done, _ = step(state, ACTION_IDLE, None, None, None, params, cache, catalog)
    assert done == []
    assert state.busy_local == 1

    _, done, _ = step(state, ACTION_IDLE, None, None, None, params, cache, catalog)
    assert [e.task for e in done] == [task]
    assert done[0].completion_slot == 2  # assigned at 0, N=3, ends slot 2
    assert done[0].mode == "local"
    assert state.busy_local == 0
    assert state.in_service_local is None


def test_step_single_slot_task_completes_immediately(catalog, cache) -> None:
    params = _params(f_local_hz=1e12, rate_bps=1e12)
    task = _task([1, 2, 3])
    state = SystemState.empty()
    state.queue.append(task)
    _, done, _ = step(state, ACTION_FIRST_LOCAL, task, None, None, params, cache, catalog)
    assert [e.task for e in done] == [task]
    assert done[0].completion_slot == 0
    assert state.busy_local == 0


def test_step_departures_precede_arrival(catalog, cache) -> None:
    params = _params()
    first = _task(list(range(1, 51)), slot=0)
    second = _task(list(range(1, 51)), slot=1)
    fresh = _task([3], slot=2)
    state = SystemState.empty()
    state.queue.extend([first, second])
    step(state, ACTION_SPLIT_LOCAL_MEC, first, second, fresh, params, cache, catalog)
    assert list(state.queue) == [fresh]
    assert state.busy_local > 0 and state.busy_mec > 0


def test_step_rejects_illegal_actions(catalog, cache) -> None:
    params = _params()
    task = _task([1, 51])
    state = SystemState.empty()
    state.queue.append(task)

    with pytest.raises(ContractViolation):
        # schedules two tasks, queue holds one
        step(state, ACTION_SPLIT_LOCAL_MEC, task, None, None, params, cache, catalog)
    with pytest.raises(ContractViolation):
        # first_task must be the queue head object
        step(state, ACTION_FIRST_LOCAL, _task([9]), None, None, params, cache, catalog)
    state.busy_local = 2
    with pytest.raises(ContractViolation):
        step(state, ACTION_FIRST_LOCAL, task, None, None, params, cache, catalog)
    state.busy_local = 0
    state.busy_mec = 1
    with pytest.raises(ContractViolation):
        step(state, ACTION_FIRST_MEC, task, None, None, params, cache, catalog)
    with pytest.raises(ContractViolation):
        step(state, Action(1, 1, 0, 0), task, task, None, params, cache, catalog)


def test_step_busy_countdown_without_assignment(catalog, cache) -> None:
    params = _params()
    state = SystemState.empty()
    task = _task(list(range(1, 51)))
    state.queue.append(task)
    step(state, ACTION_FIRST_MEC, task, None, None, params, cache, catalog)
    assert state.busy_mec == 2  # N_mec = 3
    arrivals = [_task([1], slot=s) for s in (1, 2)]
    step(state, ACTION_IDLE, None, None, arrivals[0], params, cache, catalog)
    assert state.busy_mec == 1
    assert len(state.queue) == 1
    _, done, _ = step(state, ACTION_IDLE, None, None, arrivals[1], params, cache, catalog)
    assert state.busy_mec == 0
    assert [e.task for e in done] == [task]
    assert len(state.queue) == 2
