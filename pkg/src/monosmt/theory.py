"""Framework for lazy theory solvers over monotonic Boolean predicates.

A predicate over a set of argument variables (its S-atoms) is *positive
monotonic* when flipping any argument from false to true can never flip the
predicate from true to false, and *negative monotonic* in the symmetric case.
Each predicate is tied to one solver variable, its atom, which must hold
exactly when the predicate holds.

Under a partial assignment every completion of the S-atoms lies between two
extremes: the *minimal* completion assigns false to every unassigned S-atom
and the *maximal* completion assigns true. For a positive predicate, truth on
the minimal completion forces the atom true everywhere and falsity on the
maximal completion forces it false; a negative predicate swaps which extreme
guarantees which polarity. That pair of checks is the whole propagation rule.
"""
from __future__ import annotations

from .sat import TRUE, FALSE, UNDEF, mk_lit, neg

POSITIVE = 1
NEGATIVE = -1

_NO_RESULT = ((), None)


class AtomBinding:
    """Registration record tying a solver var to one predicate instance."""

    __slots__ = ("atom_id", "pvar", "polarity", "kind", "payload")

    def __init__(self, atom_id, pvar, polarity, kind, payload):
        self.atom_id = atom_id
        self.pvar = pvar
        self.polarity = polarity
        self.kind = kind
        self.payload = payload


class MonotonicTheory:
    """Base class driving under/over-approximation propagation.

    Subclasses supply ``eval_completion(pred, maximal)`` evaluating one
    predicate on the minimal or maximal completion of the current trail, and
    may override ``witness_lits`` to produce algorithm-specific reason
    clauses; the base falls back to the justification-set clause built from
    one polarity of S-atom assignments.
    """

    def __init__(self):
        self.solver = None
        self.tid = -1
        self._preds: list[AtomBinding] = []
        self._svars: set[int] = set()
        self._pvars: dict[int, int] = {}  # pvar -> atom_id
        # Completion generations: bumped when the respective extreme changes.
        self._min_gen = 0
        self._max_gen = 0
        self._stamp = 0
        self._scan_stamp = -1
        self._eval_cache: dict[tuple[int, bool], tuple[int, bool]] = {}

    # -- registration ---------------------------------------------------

    def add_s_var(self, var: int) -> None:
        if var in self._pvars:
            raise ValueError("var %d is already a predicate atom" % var)
        self._svars.add(var)

    def register_predicate(self, pvar: int, polarity: int, kind: str,
                           payload) -> int:
        if pvar in self._svars:
            raise ValueError("atom var %d is already an argument var" % pvar)
        if pvar in self._pvars:
            raise ValueError("var %d already bound to a predicate" % pvar)
        atom_id = len(self._preds)
        binding = AtomBinding(atom_id, pvar, polarity, kind, payload)
        self._preds.append(binding)
        self._pvars[pvar] = atom_id
        return atom_id

    def attach(self, solver, tid: int) -> None:
        self.solver = solver
        self.tid = tid
        for v in self._svars:
            solver.watch_var(v, self)
        for v in self._pvars:
            solver.watch_var(v, self)

    def atom(self, atom_id: int) -> AtomBinding:
        return self._preds[atom_id]

    # -- solver callbacks ------------------------------------------------

    def on_assign(self, lit: int) -> None:
        v = lit >> 1
        if v in self._svars:
            if lit & 1:
                self._max_gen += 1  # maximal completion lost a member
            else:
                self._min_gen += 1  # minimal completion gained one
        self._stamp += 1

    def on_backjump(self, level: int) -> None:
        self._min_gen += 1
        self._max_gen += 1
        self._stamp += 1

    def propagate(self):
        """Scan all predicates; returns (implied, conflict_lits).

        ``implied`` is a tuple of (literal, atom_id) pairs over currently
        unassigned atoms; ``conflict_lits`` is a falsified clause when an
        implication contradicts an existing atom assignment.
        """
        if self._stamp == self._scan_stamp:
            return _NO_RESULT
        self._scan_stamp = self._stamp
        solver = self.solver
        implied = []
        for pred in self._preds:
            val = solver.var_value(pred.pvar)
            if val != TRUE:
                # Truth on this extreme survives every completion.
                if self._cached_eval(pred, pred.polarity == NEGATIVE):
                    if val == FALSE:
                        return (), self.explain(pred.atom_id,
                                                mk_lit(pred.pvar))
                    implied.append((mk_lit(pred.pvar), pred.atom_id))
                    continue
            if val != FALSE:
                if not self._cached_eval(pred, pred.polarity == POSITIVE):
                    if val == TRUE:
                        return (), self.explain(pred.atom_id,
                                                mk_lit(pred.pvar, True))
                    implied.append((mk_lit(pred.pvar, True), pred.atom_id))
        return tuple(implied), None

    def explain(self, atom_id: int, lit: int) -> list[int]:
        """Reason clause for an implied atom literal, implied literal first.

        Every other literal is false under the trail prefix that precedes the
        implication (the full trail for a fresh conflict).
        """
        pred = self._preds[atom_id]
        assert lit >> 1 == pred.pvar
        positive = not (lit & 1)
        solver = self.solver
        p = solver.pos[pred.pvar]
        if p >= 0 and solver.lit_value(lit) == TRUE:
            prefix = p  # explaining the trail assignment itself
        else:
            prefix = len(solver.trail)  # contradiction with the current trail
        rest = self.witness_lits(pred, positive, prefix)
        if rest is None:
            rest = self.fallback_lits(pred, positive, prefix)
        return [lit] + rest

    def decide_hint(self):
        return None

    # -- helpers for subclasses -------------------------------------------

    def s_assignment(self, prefix: int):
        """(true_vars, false_vars) among S-atoms assigned before ``prefix``."""
        solver = self.solver
        true_vars, false_vars = set(), set()
        for v in self._svars:
            p = solver.pos[v]
            if 0 <= p < prefix:
                if solver.var_value(v) == TRUE:
                    true_vars.add(v)
                else:
                    false_vars.add(v)
        return true_vars, false_vars

    def fallback_lits(self, pred, positive: bool, prefix: int) -> list[int]:
        """Justification-set clause tail from one polarity of assignments.

        For a positive predicate an implied-true atom is justified by the
        S-atoms assigned true (their loss could only weaken the predicate),
        and an implied-false atom by those assigned false; a negative
        predicate swaps the roles.
        """
        true_vars, false_vars = self.s_assignment(prefix)
        use_true = positive == (pred.polarity == POSITIVE)
        if use_true:
            return [mk_lit(v, True) for v in sorted(true_vars)]
        return [mk_lit(v) for v in sorted(false_vars)]

    def witness_lits(self, pred, positive: bool, prefix: int):
        """Algorithm-specific clause tail, or None to use the fallback."""
        return None

    def _cached_eval(self, pred, maximal: bool) -> bool:
        gen = self._max_gen if maximal else self._min_gen
        key = (pred.atom_id, maximal)
        hit = self._eval_cache.get(key)
        if hit is not None and hit[0] == gen:
            return hit[1]
        value = self.eval_completion(pred, maximal)
        self._eval_cache[key] = (gen, value)
        return value

    def eval_completion(self, pred, maximal: bool) -> bool:
        raise NotImplementedError
