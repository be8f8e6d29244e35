"""Uniprocessor schedulability theory.

Each task of a processor is guarded by a solver variable; a schedulable atom
states that the selected task set meets every deadline under preemptive
earliest-deadline-first dispatch. The predicate is negative monotone: adding
tasks can only introduce misses, so a miss under the tasks assigned true is
final while feasibility of the full candidate set settles the atom positively.

Explanations for misses use a busy-window argument: walking left from the
missed deadline through the region continuously covered by pending tasks with
deadlines at or before it yields a window that those tasks alone overload, so
the clause blaming just them is valid no matter what else runs.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass

from .sat import TRUE, FALSE, mk_lit
from .theory import MonotonicTheory, NEGATIVE


@dataclass(frozen=True)
class TaskSpec:
    tid: int
    var: int
    arrival: int
    duration: int
    deadline: int


class EdfResult:
    __slots__ = ("miss_tid", "miss_deadline", "completion", "segments")

    def __init__(self, miss_tid, miss_deadline, completion, segments):
        self.miss_tid = miss_tid
        self.miss_deadline = miss_deadline
        self.completion = completion
        self.segments = segments  # (start, end, tid) execution chunks

    @property
    def feasible(self):
        return self.miss_tid is None


def edf_simulate(tasks, enabled) -> EdfResult:
    """Run preemptive EDF over the enabled tasks until the first detected
    deadline miss or completion of all work. Ties pop by (deadline, arrival,
    task id)."""
    jobs = sorted((t for t in tasks if enabled[t.tid]),
                  key=lambda t: (t.arrival, t.deadline, t.tid))
    rem = {t.tid: t.duration for t in jobs}
    completion = {}
    segments = []
    heap = []
    now = 0
    i = 0
    n = len(jobs)
    while i < n or heap:
        if not heap:
            now = max(now, jobs[i].arrival)
        while i < n and jobs[i].arrival <= now:
            t = jobs[i]
            heapq.heappush(heap, (t.deadline, t.arrival, t.tid))
            i += 1
        if not heap:
            continue
        d, a, tid = heap[0]
        finish = now + rem[tid]
        next_arr = jobs[i].arrival if i < n else None
        if next_arr is not None and next_arr < finish:
            rem[tid] -= next_arr - now
            segments.append((now, next_arr, tid))
            now = next_arr
            if now >= d:  # still pending at the deadline
                return EdfResult(tid, d, completion, segments)
            continue
        heapq.heappop(heap)
        rem[tid] = 0
        segments.append((now, finish, tid))
        now = finish
        completion[tid] = finish
        if finish > d:
            return EdfResult(tid, d, completion, segments)
    return EdfResult(None, None, completion, segments)


def busy_window_tasks(tasks, enabled, result: EdfResult):
    """Task ids whose combined demand overloads the window ending at the
    missed deadline. The returned set is jointly infeasible on any
    uniprocessor, independent of what other tasks exist."""
    miss = tasks[result.miss_tid]
    t_miss = result.miss_deadline
    if miss.arrival + miss.duration > miss.deadline:
        return [miss.tid]
    intervals = []
    for t in tasks:
        if not enabled[t.tid] or t.deadline > t_miss:
            continue
        hi = min(result.completion.get(t.tid, t_miss), t_miss)
        if t.arrival < hi:
            intervals.append((t.arrival, hi))
    intervals.sort()
    lo, hi = intervals[0]
    t0 = lo
    for s, e in intervals[1:]:
        if s > hi:
            lo, hi = s, e
            t0 = lo
        elif e > hi:
            hi = e
    assert hi >= t_miss, "miss window not covered"
    picked = [t.tid for t in tasks
              if enabled[t.tid] and t.deadline <= t_miss
              and t0 <= t.arrival < t_miss]
    assert sum(tasks[tid].duration for tid in picked) > t_miss - t0
    return picked


class ProcessorTheory(MonotonicTheory):
    """Theory solver for the schedulability atoms of one processor."""

    def __init__(self, pid: int):
        super().__init__()
        self.pid = pid
        self.tasks = []
        self._seen_vars = set()
        self._sim_cache = {}

    def add_task(self, var, arrival, duration, deadline) -> int:
        if var in self._seen_vars:
            raise ValueError("task var %d used twice on processor %d"
                             % (var, self.pid))
        if arrival < 0 or duration < 1:
            raise ValueError("task needs arrival >= 0 and duration >= 1")
        self._seen_vars.add(var)
        tid = len(self.tasks)
        self.tasks.append(TaskSpec(tid, var, arrival, duration, deadline))
        self.add_s_var(var)
        return tid

    def add_schedulable(self, pvar) -> int:
        return self.register_predicate(pvar, NEGATIVE, "schedulable", ())

    # -- completions --------------------------------------------------------

    def _enabled_now(self, maximal):
        value = self.solver.var_value
        if maximal:
            return bytearray(0 if value(t.var) == FALSE else 1
                             for t in self.tasks)
        return bytearray(1 if value(t.var) == TRUE else 0
                         for t in self.tasks)

    def _enabled_prefix(self, maximal, prefix):
        solver = self.solver
        fill = 1 if maximal else 0
        out = bytearray(len(self.tasks))
        for t in self.tasks:
            p = solver.pos[t.var]
            if 0 <= p < prefix:
                out[t.tid] = 1 if solver.var_value(t.var) == TRUE else 0
            else:
                out[t.tid] = fill
        return out

    def _simulate_now(self, maximal):
        gen = self._max_gen if maximal else self._min_gen
        hit = self._sim_cache.get(maximal)
        if hit is not None and hit[0] == gen:
            return hit[1]
        res = edf_simulate(self.tasks, self._enabled_now(maximal))
        self._sim_cache[maximal] = (gen, res)
        return res

    # -- theory interface ------------------------------------------------------

    def eval_completion(self, pred, maximal):
        return self._simulate_now(maximal).feasible

    def eval_concrete(self, enabled):
        return edf_simulate(self.tasks, enabled).feasible

    def witness_lits(self, pred, positive, prefix):
        if positive:
            return None  # fall back to the disabled-task clause
        enabled = self._enabled_prefix(False, prefix)
        result = edf_simulate(self.tasks, enabled)
        assert not result.feasible, "witness requested without a miss"
        return [mk_lit(self.tasks[tid].var, True)
                for tid in busy_window_tasks(self.tasks, enabled, result)]

    def model_witness(self, pred, enabled):
        """Chronological (taskId, start, end) run chunks of the EDF schedule
        for a full model, flattened; adjacent chunks of a task merged."""
        result = edf_simulate(self.tasks, enabled)
        merged = []
        for s, e, tid in result.segments:
            if merged and merged[-1][2] == tid and merged[-1][1] == s:
                merged[-1][1] = e
            else:
                merged.append([s, e, tid])
        tokens = []
        for s, e, tid in merged:
            tokens.extend((tid, s, e))
        return tokens
