"""Conflict-driven search for stable models of a ground normal program.

The program is translated into its Clark completion (one Boolean variable
per atom plus one per non-trivial rule body).  Completion models of tight
programs are exactly the stable models; for non-tight programs every total
assignment is checked against the least model of its reduct and a loop
nogood is learned for the unfounded atoms.  An optional pseudo-Boolean
bound over weak-constraint literals is propagated natively.

Literals are non-zero ints: ``v`` is true, ``-v`` false.  Atom ``i`` of the
ground program is variable ``i + 1``.
"""

from __future__ import annotations

import heapq
from typing import Iterable, Sequence

from ._graph import sccs
from .grounder import GroundProgram

_DECAY = 1 / 0.95


def _luby(i: int) -> int:
    k = 1
    while (1 << k) - 1 < i:
        k += 1
    while True:
        if i == (1 << k) - 1:
            return 1 << (k - 1)
        i -= (1 << (k - 1)) - 1
        k = 1
        while (1 << k) - 1 < i:
            k += 1


def positive_sccs(gp: GroundProgram) -> list[list[int]]:
    """Strongly connected components of the positive atom dependency graph."""
    succ: dict[int, list[int]] = {}
    for r in gp.rules:
        if r.head is not None:
            succ.setdefault(r.head, []).extend(r.pos)
    return sccs(range(len(gp.atoms)), succ)


class Solver:
    """Incremental solver: clauses and the cost bound only ever tighten."""

    def __init__(self, gp: GroundProgram):
        self.gp = gp
        self.ok = True
        self.nvars = 0
        self.value: list[int] = [0]
        self.level: list[int] = [0]
        self.reason: list = [None]
        self.activity: list[float] = [0.0]
        self.phase: list[int] = [0]
        self.watches: list[list] = [[], []]
        self.trail: list[int] = []
        self.trail_lim: list[int] = []
        self.qhead = 0
        self.var_inc = 1.0
        self.heap: list = []
        self.learnts: list[list[int]] = []
        self.conflicts = 0
        self.decisions = 0
        self.core: list[int] = []
        self.model: list[int] | None = None
        # cost bound
        self.cost_of: dict[int, int] = {}  # var -> signed weight (sign = literal polarity)
        self.cost_lits: list[tuple[int, int]] = []  # (literal, weight), heaviest first
        self.cost_offset = 0
        self.cost_sum = 0
        self.bound: int | None = None

        self._new_vars(len(gp.atoms))
        self._build()

    # -- variables and clauses

    def _new_vars(self, k: int) -> None:
        for _ in range(k):
            self.nvars += 1
            v = self.nvars
            self.value.append(0)
            self.level.append(0)
            self.reason.append(None)
            self.activity.append(0.0)
            self.phase.append(-1)
            self.watches.append([])
            self.watches.append([])
            heapq.heappush(self.heap, (0.0, v))

    def _new_var(self) -> int:
        self._new_vars(1)
        return self.nvars

    @staticmethod
    def _widx(lit: int) -> int:
        return 2 * lit if lit > 0 else -2 * lit + 1

    def lit_value(self, lit: int) -> int:
        v = self.value[lit] if lit > 0 else -self.value[-lit]
        return v

    def add_clause(self, lits: Iterable[int]) -> bool:
        """Add a permanent clause (backtracks to the root first)."""
        if not self.ok:
            return False
        self._cancel_until(0)
        clause: list[int] = []
        seen = set()
        for l in lits:
            if -l in seen:
                return True
            if l in seen:
                continue
            seen.add(l)
            val = self.lit_value(l)
            if val == 1 and self.level[abs(l)] == 0:
                return True
            if val == -1 and self.level[abs(l)] == 0:
                continue
            clause.append(l)
        if not clause:
            self.ok = False
            return False
        if len(clause) == 1:
            self._assign(clause[0], None)
            if self._propagate() is not None:
                self.ok = False
                return False
            return True
        self._attach(clause)
        return True

    def _attach(self, clause: list[int]) -> None:
        self.watches[self._widx(clause[0])].append(clause)
        self.watches[self._widx(clause[1])].append(clause)

    def _body_literal(self, pos: Sequence[int], neg: Sequence[int], cache: dict) -> int | None:
        """Literal equivalent to a rule body; None for the empty body."""
        lits = tuple(sorted({p + 1 for p in pos} | {-(n + 1) for n in neg}))
        if not lits:
            return None
        if len(lits) == 1:
            return lits[0]
        b = cache.get(lits)
        if b is None:
            b = cache[lits] = self._new_var()
            for l in lits:
                self.add_clause([-b, l])
            self.add_clause([b] + [-l for l in lits])
        return b

    def _build(self) -> None:
        gp = self.gp
        cache: dict = {}
        n = len(gp.atoms)
        supports: list[list[int | None]] = [[] for _ in range(n)]
        self.rule_body: list[int | None] = []
        for r in gp.rules:
            if r.head is None:
                lits = [-(p + 1) for p in r.pos] + [n_ + 1 for n_ in r.neg]
                self.add_clause(lits)
                self.rule_body.append(None)
                continue
            b = self._body_literal(r.pos, r.neg, cache)
            self.rule_body.append(b)
            head = r.head + 1
            if b is None:
                self.add_clause([head])
            else:
                self.add_clause([-b, head])
            supports[r.head].append(b)
        for a in range(n):
            sup = supports[a]
            if any(b is None for b in sup):
                continue
            self.add_clause([-(a + 1)] + sup)

        # weak constraints -> cost literals
        weights: dict[int, int] = {}
        for w in gp.weak:
            if w.weight == 0:
                continue
            b = self._body_literal(w.pos, w.neg, cache)
            if b is None:
                self.cost_offset += w.weight
            else:
                weights[b] = weights.get(b, 0) + w.weight
        for lit in list(weights):
            if lit in weights and -lit in weights:
                wp, wn = weights.pop(lit), weights.pop(-lit)
                common = min(wp, wn)
                self.cost_offset += common
                if wp > common:
                    weights[lit] = wp - common
                if wn > common:
                    weights[-lit] = wn - common
        self.cost_lits = sorted(weights.items(), key=lambda kv: (-kv[1], abs(kv[0])))
        for lit, wt in self.cost_lits:
            self.cost_of[abs(lit)] = wt if lit > 0 else -wt
        # costs already fixed at the root
        for v in range(1, self.nvars + 1):
            if self.value[v] != 0:
                self._account(v, self.value[v])

        # non-tight part: atoms in cyclic positive components
        self_loop = any(r.head is not None and r.head in r.pos for r in gp.rules)
        self.nontight = self_loop or any(len(c) > 1 for c in positive_sccs(gp))
        if self.nontight:
            self._pos_occ: list[list[int]] = [[] for _ in range(n)]
            self._head_rules: list[list[int]] = [[] for _ in range(n)]
            for ri, r in enumerate(gp.rules):
                if r.head is None:
                    continue
                self._head_rules[r.head].append(ri)
                for p in set(r.pos):
                    self._pos_occ[p].append(ri)
        if self.ok and self._propagate() is not None:
            self.ok = False

    # -- cost bound

    def _account(self, v: int, val: int) -> None:
        w = self.cost_of.get(v)
        if w is not None and (w > 0) == (val > 0):
            self.cost_sum += abs(w)

    def set_bound(self, bound: int | None) -> None:
        """Require total cost <= bound; bounds may only decrease."""
        if bound is not None:
            bound -= self.cost_offset
        if self.bound is not None and (bound is None or bound > self.bound):
            raise ValueError("cost bound can only be tightened")
        self.bound = bound
        self._cancel_until(0)
        if bound is not None and bound < 0:
            self.ok = False
        elif self.ok and self._propagate() is not None:
            self.ok = False

    def model_cost(self) -> int:
        total = self.cost_offset
        for lit, w in self.cost_lits:
            if self.lit_value(lit) == 1:
                total += w
        return total

    def _true_cost_lits(self) -> list[int]:
        return [lit for lit, _ in self.cost_lits if self.lit_value(lit) == 1]

    def _propagate_bound(self):
        """Returns a conflict clause, or None; may enqueue implied literals."""
        if self.bound is None:
            return None
        slack = self.bound - self.cost_sum
        if slack < 0:
            return [-l for l in self._true_cost_lits()]
        reason_tail = None
        for lit, w in self.cost_lits:
            if w <= slack:
                break
            if self.lit_value(lit) == 0:
                if reason_tail is None:
                    reason_tail = [-l for l in self._true_cost_lits()]
                self._assign(-lit, [-lit] + reason_tail)
        return None

    # -- assignment

    def _assign(self, lit: int, reason) -> None:
        v = lit if lit > 0 else -lit
        val = 1 if lit > 0 else -1
        self.value[v] = val
        self.level[v] = len(self.trail_lim)
        self.reason[v] = reason
        self.trail.append(lit)
        w = self.cost_of.get(v)
        if w is not None and (w > 0) == (val > 0):
            self.cost_sum += abs(w)

    def _cancel_until(self, lvl: int) -> None:
        if len(self.trail_lim) <= lvl:
            return
        start = self.trail_lim[lvl]
        value, phase, cost_of, act, heap = self.value, self.phase, self.cost_of, self.activity, self.heap
        for i in range(len(self.trail) - 1, start - 1, -1):
            lit = self.trail[i]
            v = lit if lit > 0 else -lit
            val = value[v]
            phase[v] = val
            w = cost_of.get(v)
            if w is not None and (w > 0) == (val > 0):
                self.cost_sum -= abs(w)
            value[v] = 0
            self.reason[v] = None
            heapq.heappush(heap, (-act[v], v))
        del self.trail[start:]
        del self.trail_lim[lvl:]
        self.qhead = min(self.qhead, start)

    def _propagate(self):
        value = self.value
        watches = self.watches
        trail = self.trail
        while True:
            while self.qhead < len(trail):
                p = trail[self.qhead]
                self.qhead += 1
                false_lit = -p
                fidx = 2 * false_lit if false_lit > 0 else -2 * false_lit + 1
                ws = watches[fidx]
                kept = []
                k = 0
                n = len(ws)
                while k < n:
                    c = ws[k]
                    k += 1
                    if c[0] == false_lit:
                        c[0], c[1] = c[1], false_lit
                    first = c[0]
                    fv = value[first] if first > 0 else -value[-first]
                    if fv == 1:
                        kept.append(c)
                        continue
                    for m in range(2, len(c)):
                        l = c[m]
                        lv = value[l] if l > 0 else -value[-l]
                        if lv != -1:
                            c[1] = l
                            c[m] = false_lit
                            watches[2 * l if l > 0 else -2 * l + 1].append(c)
                            break
                    else:
                        kept.append(c)
                        if fv == -1:
                            kept.extend(ws[k:])
                            watches[fidx] = kept
                            self.qhead = len(trail)
                            return c
                        self._assign(first, c)
                watches[fidx] = kept
            confl = self._propagate_bound()
            if confl is not None:
                return confl
            if self.qhead >= len(trail):
                return None

    # -- conflict analysis

    def _bump(self, v: int) -> None:
        act = self.activity
        act[v] += self.var_inc
        if act[v] > 1e100:
            for i in range(1, self.nvars + 1):
                act[i] *= 1e-100
            self.var_inc *= 1e-100
            self.heap = [(-act[u], u) for u in range(1, self.nvars + 1) if self.value[u] == 0]
            heapq.heapify(self.heap)
        elif self.value[v] == 0:
            heapq.heappush(self.heap, (-act[v], v))

    def _analyze(self, confl: list[int]) -> tuple[list[int], int]:
        level = self.level
        seen = set()
        learnt: list[int] = [0]
        cur = len(self.trail_lim)
        path = 0
        p = 0
        idx = len(self.trail) - 1
        clause = confl
        while True:
            for q in clause:
                v = q if q > 0 else -q
                if v == p or v in seen or level[v] == 0:
                    continue
                seen.add(v)
                self._bump(v)
                if level[v] >= cur:
                    path += 1
                else:
                    learnt.append(q)
            while True:
                lit = self.trail[idx]
                idx -= 1
                if (lit if lit > 0 else -lit) in seen:
                    break
            p = lit if lit > 0 else -lit
            seen.discard(p)
            path -= 1
            if path <= 0:
                break
            clause = self.reason[p]
        learnt[0] = -lit
        # drop literals implied by the rest of the clause
        keep = set(abs(l) for l in learnt)
        out = [learnt[0]]
        for l in learnt[1:]:
            r = self.reason[abs(l)]
            if r is None or any(
                abs(x) != abs(l) and abs(x) not in keep and level[abs(x)] > 0 for x in r
            ):
                out.append(l)
        if len(out) == 1:
            bt = 0
        else:
            best = max(range(1, len(out)), key=lambda i: level[abs(out[i])])
            out[1], out[best] = out[best], out[1]
            bt = level[abs(out[1])]
        self.var_inc *= _DECAY
        return out, bt

    def _analyze_final(self, lit: int) -> list[int]:
        """Assumptions responsible for ``lit`` being false."""
        core = [lit]
        if not self.trail_lim:
            return core
        seen = {abs(lit)}
        for i in range(len(self.trail) - 1, self.trail_lim[0] - 1, -1):
            x = self.trail[i]
            v = abs(x)
            if v not in seen:
                continue
            r = self.reason[v]
            if r is None:
                if self.level[v] > 0:
                    core.append(x)
            else:
                for q in r:
                    u = abs(q)
                    if u != v and self.level[u] > 0:
                        seen.add(u)
        return core

    def _handle_conflict(self, confl: list[int]) -> bool:
        """Learn from a falsified clause; False means unsatisfiable."""
        self.conflicts += 1
        lvl = max((self.level[abs(l)] for l in confl), default=0)
        if lvl == 0:
            return False
        at_top = [l for l in confl if self.level[abs(l)] == lvl]
        if len(at_top) == 1:
            # asserting at a lower level
            rest = [l for l in confl if self.level[abs(l)] < lvl]
            bt = max((self.level[abs(l)] for l in rest), default=0)
            self._cancel_until(bt)
            clause = at_top + rest
            if len(clause) > 1:
                best = max(range(1, len(clause)), key=lambda i: self.level[abs(clause[i])])
                clause[1], clause[best] = clause[best], clause[1]
                self._attach(clause)
                self.learnts.append(clause)
                self._assign(clause[0], clause)
            else:
                self._assign(clause[0], None)
            return True
        self._cancel_until(lvl)
        learnt, bt = self._analyze(confl)
        self._cancel_until(bt)
        if len(learnt) == 1:
            self._assign(learnt[0], None)
        else:
            self._attach(learnt)
            self.learnts.append(learnt)
            self._assign(learnt[0], learnt)
        return True

    # -- unfounded sets

    def _unfounded(self) -> list[int] | None:
        """Loop nogood violated by the current total assignment, if any."""
        gp = self.gp
        value = self.value
        rules = gp.rules
        n = len(gp.atoms)
        derived = [False] * n
        missing = [0] * len(rules)
        queue: list[int] = []
        for ri, r in enumerate(rules):
            if r.head is None:
                continue
            if any(value[x + 1] == 1 for x in r.neg):
                missing[ri] = -1
                continue
            missing[ri] = len(set(r.pos))
            if missing[ri] == 0 and not derived[r.head]:
                derived[r.head] = True
                queue.append(r.head)
        while queue:
            a = queue.pop()
            for ri in self._pos_occ[a]:
                if missing[ri] > 0:
                    missing[ri] -= 1
                    if missing[ri] == 0:
                        h = rules[ri].head
                        if not derived[h]:
                            derived[h] = True
                            queue.append(h)
        unfounded = [a for a in range(n) if value[a + 1] == 1 and not derived[a]]
        if not unfounded:
            return None
        uset = set(unfounded)
        a = unfounded[0]
        ext = []
        for u in unfounded:
            for ri in self._head_rules[u]:
                if not uset.intersection(rules[ri].pos):
                    ext.append(self.rule_body[ri])
        return [-(a + 1)] + list(dict.fromkeys(ext))

    # -- search

    def _pick(self) -> int:
        heap, value, act = self.heap, self.value, self.activity
        while heap:
            a, v = heapq.heappop(heap)
            if value[v] == 0 and -a == act[v]:
                return v
            if value[v] == 0 and -a < act[v]:
                continue
        for v in range(1, self.nvars + 1):
            if value[v] == 0:
                return v
        return 0

    def solve(self, assumptions: Sequence[int] = ()) -> bool:
        """Search for a stable model; the model is left in ``self.model``."""
        self.model = None
        self.core = []
        if not self.ok:
            return False
        self._cancel_until(0)
        if self._propagate() is not None:
            self.ok = False
            return False
        restart_no = 1
        budget = 64 * _luby(restart_no)
        since_restart = 0
        while True:
            confl = self._propagate()
            if confl is not None:
                if not self._handle_conflict(confl):
                    self.ok = False
                    return False
                since_restart += 1
                continue
            if since_restart >= budget:
                restart_no += 1
                budget = 64 * _luby(restart_no)
                since_restart = 0
                self._cancel_until(0)
                continue
            lvl = len(self.trail_lim)
            if lvl < len(assumptions):
                lit = assumptions[lvl]
                val = self.lit_value(lit)
                if val == -1:
                    self.core = self._analyze_final(lit)
                    self._cancel_until(0)
                    return False
                self.trail_lim.append(len(self.trail))
                if val == 0:
                    self._assign(lit, None)
                continue
            v = self._pick()
            if v == 0:
                if self.nontight:
                    nogood = self._unfounded()
                    if nogood is not None:
                        if not self._handle_conflict(nogood):
                            self.ok = False
                            return False
                        continue
                n = len(self.gp.atoms)
                self.model = [a for a in range(n) if self.value[a + 1] == 1]
                self.model_cost_value = self.model_cost()
                self._cancel_until(0)
                return True
            self.decisions += 1
            self.trail_lim.append(len(self.trail))
            self._assign(v if self.phase[v] > 0 else -v, None)
