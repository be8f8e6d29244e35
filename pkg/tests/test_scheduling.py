"""EDF simulation, busy-window explanations, and the schedulability theory."""

import random

import pytest

from monosmt import oracle
from monosmt.build import dimacs_lit, run_solve, solve_doc
from monosmt.gnf import GnfDocument, PredDecl, ProcDecl, TaskDecl
from monosmt.scheduling import (ProcessorTheory, TaskSpec, busy_window_tasks,
                                edf_simulate)


def specs(triples):
    return [TaskSpec(i, i + 1, a, l, d)
            for i, (a, l, d) in enumerate(triples)]


def all_on(tasks):
    return bytearray([1]) * len(tasks)


def sched_doc(triples, clauses):
    """Task vars 1..n, schedulable atom var n+1."""
    doc = GnfDocument(nvars=len(triples) + 1)
    proc = ProcDecl(1)
    for i, (a, l, d) in enumerate(triples):
        proc.tasks.append(TaskDecl(1, a, l, d, i + 1))
    doc.procs[1] = proc
    doc.preds.append(PredDecl("schedulable", 1, (), len(triples) + 1))
    doc.clauses = [list(c) for c in clauses]
    return doc


# -- simulator ---------------------------------------------------------------

def test_exact_fit_is_feasible():
    tasks = specs([(0, 2, 2)])
    res = edf_simulate(tasks, all_on(tasks))
    assert res.feasible
    assert res.completion == {0: 2}
    assert res.segments == [(0, 2, 0)]


def test_two_tasks_overload_one_slot():
    tasks = specs([(0, 2, 2), (0, 2, 3)])
    res = edf_simulate(tasks, all_on(tasks))
    assert (res.miss_tid, res.miss_deadline) == (1, 3)
    assert busy_window_tasks(tasks, all_on(tasks), res) == [0, 1]


def test_impossible_task_blamed_alone():
    # The first task cannot fit its own window, so the explanation must not
    # drag the later task in.
    tasks = specs([(0, 5, 4), (4, 1, 9)])
    res = edf_simulate(tasks, all_on(tasks))
    assert (res.miss_tid, res.miss_deadline) == (0, 4)
    assert busy_window_tasks(tasks, all_on(tasks), res) == [0]


def test_miss_detected_at_preemption_boundary():
    # The miss is noticed when a preemption check lands on the deadline,
    # before the job would have finished.
    tasks = specs([(0, 5, 4), (4, 1, 9)])
    res = edf_simulate(tasks, all_on(tasks))
    assert res.segments == [(0, 4, 0)]


def test_idle_gap_between_arrivals():
    tasks = specs([(0, 1, 1), (5, 1, 6)])
    res = edf_simulate(tasks, all_on(tasks))
    assert res.feasible
    assert res.segments == [(0, 1, 0), (5, 6, 1)]


def test_deadline_tie_breaks_by_arrival_then_id():
    tasks = specs([(1, 1, 4), (0, 1, 4)])
    res = edf_simulate(tasks, all_on(tasks))
    assert res.feasible
    assert res.segments == [(0, 1, 1), (1, 2, 0)]


def test_busy_window_needs_every_contributor():
    # Jointly infeasible set whose every proper subset is feasible: the
    # explanation window has to keep all three tasks.
    triples = [(0, 7, 11), (1, 1, 3), (2, 4, 8)]
    tasks = specs(triples)
    res = edf_simulate(tasks, all_on(tasks))
    assert (res.miss_tid, res.miss_deadline) == (0, 11)
    assert busy_window_tasks(tasks, all_on(tasks), res) == [0, 1, 2]
    for drop in range(3):
        enabled = all_on(tasks)
        enabled[drop] = 0
        assert edf_simulate(tasks, enabled).feasible, drop


def test_window_excludes_earlier_busy_period():
    # Work that finishes before an idle gap ahead of the overload is not
    # part of the returned window.
    triples = [(0, 1, 1), (5, 2, 8), (5, 2, 7)]
    tasks = specs(triples)
    res = edf_simulate(tasks, all_on(tasks))
    assert (res.miss_tid, res.miss_deadline) == (1, 8)
    assert busy_window_tasks(tasks, all_on(tasks), res) == [1, 2]


# -- properties against the demand-criterion oracle ----------------------------

def rand_triples(rng, n):
    out = []
    for _ in range(n):
        a = rng.randrange(0, 13)
        l = rng.randrange(1, 6)
        out.append((a, l, a + rng.randrange(1, 9)))
    return out


def test_edf_agrees_with_demand_criterion():
    rng = random.Random(4242)
    for _ in range(120):
        triples = rand_triples(rng, rng.randrange(1, 7))
        tasks = specs(triples)
        enabled = bytearray(rng.randrange(2) for _ in tasks)
        got = edf_simulate(tasks, enabled).feasible
        assert got == oracle.demand_feasible(triples, enabled), (triples,
                                                                 enabled)


def test_disabling_tasks_never_hurts():
    rng = random.Random(77)
    found = 0
    for _ in range(150):
        triples = rand_triples(rng, rng.randrange(2, 7))
        tasks = specs(triples)
        enabled = bytearray(rng.randrange(2) for _ in tasks)
        if not edf_simulate(tasks, enabled).feasible:
            continue
        found += 1
        for i in range(len(tasks)):
            if enabled[i]:
                trimmed = bytearray(enabled)
                trimmed[i] = 0
                assert edf_simulate(tasks, trimmed).feasible
    assert found >= 40


def test_busy_window_subset_is_infeasible_alone():
    # The universal validity of miss explanations: the window tasks by
    # themselves overload the processor per the demand criterion.
    rng = random.Random(9001)
    misses = 0
    for _ in range(300):
        triples = rand_triples(rng, rng.randrange(2, 7))
        tasks = specs(triples)
        enabled = bytearray(rng.randrange(2) for _ in tasks)
        res = edf_simulate(tasks, enabled)
        if res.feasible:
            continue
        misses += 1
        window = busy_window_tasks(tasks, enabled, res)
        assert window
        assert all(enabled[tid] for tid in window)
        alone = bytearray(len(tasks))
        for tid in window:
            alone[tid] = 1
        assert not oracle.demand_feasible(triples, alone), (triples, window)
    assert misses >= 60


# -- theory registration ----------------------------------------------------------

def test_add_task_validation():
    th = ProcessorTheory(1)
    th.add_task(5, 0, 1, 1)
    with pytest.raises(ValueError):
        th.add_task(5, 0, 1, 1)
    with pytest.raises(ValueError):
        th.add_task(6, -1, 1, 1)
    with pytest.raises(ValueError):
        th.add_task(7, 0, 0, 1)


def test_eval_concrete_matches_simulator():
    th = ProcessorTheory(1)
    for i, (a, l, d) in enumerate([(0, 2, 2), (0, 2, 3)]):
        th.add_task(i + 1, a, l, d)
    assert th.eval_concrete(bytearray([1, 0]))
    assert not th.eval_concrete(bytearray([1, 1]))


# -- end-to-end clause shapes ------------------------------------------------------

def clause_sets(doc):
    status, values, inst = solve_doc(doc, log_clauses=True,
                                     validate_reasons=True)
    return status, [frozenset(dimacs_lit(l) for l in c)
                    for c in inst.solver.theory_clause_log]


def test_overload_clause_names_busy_window():
    doc = sched_doc([(0, 2, 2), (0, 2, 3)], [[1], [2], [3]])
    status, clauses = clause_sets(doc)
    assert status == "UNSAT"
    assert frozenset((-1, -2, -3)) in clauses
    assert oracle.check_clause_valid(doc, [-1, -2, -3]) is None


def test_singleton_overload_clause():
    doc = sched_doc([(0, 5, 4)], [[1], [2]])
    status, clauses = clause_sets(doc)
    assert status == "UNSAT"
    assert frozenset((-1, -2)) in clauses
    assert oracle.check_clause_valid(doc, [-1, -2]) is None


def test_feasible_clause_blames_disabled_tasks():
    doc = sched_doc([(0, 2, 2), (0, 2, 3)], [[1], [-2], [-3]])
    status, clauses = clause_sets(doc)
    assert status == "UNSAT"
    assert frozenset((2, 3)) in clauses
    assert oracle.check_clause_valid(doc, [2, 3]) is None


def test_all_enabled_feasible_gives_unit_clause():
    doc = sched_doc([(0, 1, 2)], [[1], [-2]])
    status, clauses = clause_sets(doc)
    assert status == "UNSAT"
    assert frozenset((2,)) in clauses


def test_schedule_witness_merges_resumed_segments():
    doc = sched_doc([(0, 5, 10), (2, 1, 20)], [[1], [2], [3]])
    code, lines = run_solve(doc, witness=True)
    assert code == 10
    assert lines[0] == "s SATISFIABLE"
    assert lines[1] == "v 1 2 3 0"
    assert lines[2] == "w schedulable 1 : 0 0 5 1 5 6"


def test_schedule_witness_keeps_real_preemptions():
    doc = sched_doc([(0, 3, 9), (1, 1, 3)], [[1], [2], [3]])
    code, lines = run_solve(doc, witness=True)
    assert code == 10
    assert lines[2] == "w schedulable 1 : 0 0 1 1 1 2 0 2 4"
