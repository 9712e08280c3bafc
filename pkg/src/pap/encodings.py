"""PAP generators for network diagnosis, travelling salesman, strategic
companies, blocks world planning and CNF satisfiability.

The rules are written as program text and go through the ordinary parser
and grounder, so every generator doubles as a parser fixture.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

from .abduction import PAP
from .errors import PapError
from .parser import parse_program
from .syntax import Atom, Literal


def _pap(hypotheses, program_text, observations, penalty, integer_bound=None) -> PAP:
    return PAP(tuple(hypotheses), parse_program(program_text), tuple(observations), penalty, integer_bound)


def _not(atom: Atom) -> Literal:
    return Literal(atom, False)


# -- network diagnosis ----------------------------------------------------

NETWORK_RULES = """\
reaches(X,X) :- node(X), not offline(X).
reaches(X,Z) :- reaches(X,Y), connected(Y,Z), not offline(Z).
"""

# undirected links of the six-machine network
NETWORK_LINKS = (("a", "f"), ("f", "e"), ("a", "b"), ("b", "c"), ("b", "d"), ("c", "e"), ("d", "e"))


def network_pap(
    nodes: Sequence[str] = "abcdef",
    links: Sequence[tuple[str, str]] = NETWORK_LINKS,
    observations: Sequence[Literal] | None = None,
) -> PAP:
    """Which machines are offline, given that ``a`` cannot reach ``e``
    although both are up.  Every machine costs 1 to assume offline."""
    lines = [f"node({n})." for n in nodes]
    for x, y in links:
        lines += [f"connected({x},{y}).", f"connected({y},{x})."]
    hyps = [Atom("offline", (n,)) for n in nodes]
    if observations is None:
        observations = [
            _not(Atom("offline", ("a",))),
            _not(Atom("offline", ("e",))),
            _not(Atom("reaches", ("a", "e"))),
        ]
    return _pap(hyps, "\n".join(lines) + "\n" + NETWORK_RULES, observations, {h: 1 for h in hyps})


# -- travelling salesman --------------------------------------------------

TSP_RULES = """\
visited(I) :- visited(J), c(J,I).
visited(1) :- c(J,1).
missedCity :- city(I), not visited(I).
badTour :- c(I,J), c(I,K), J != K.
badTour :- c(J,I), c(K,I), J != K.
"""


@dataclass(frozen=True)
class TspInstance:
    n: int
    w: Mapping[tuple[int, int], int]

    def __post_init__(self):
        if self.n < 2:
            raise PapError("ILLEGAL_INSTANCE", "at least two cities are needed")
        for i, j in itertools.permutations(range(1, self.n + 1), 2):
            if (i, j) not in self.w:
                raise PapError("ILLEGAL_INSTANCE", f"missing cost for ({i},{j})")

    @classmethod
    def symmetric(cls, n: int, w: Mapping[tuple[int, int], int]) -> "TspInstance":
        full = {}
        for (i, j), c in w.items():
            full[(i, j)] = full[(j, i)] = c
        return cls(n, full)

    @classmethod
    def random(cls, n: int, rng: random.Random, max_cost: int = 9, symmetric: bool = False):
        pairs = itertools.combinations if symmetric else itertools.permutations
        w = {p: rng.randint(1, max_cost) for p in pairs(range(1, n + 1), 2)}
        return cls.symmetric(n, w) if symmetric else cls(n, w)

    def tour_cost(self, order: Sequence[int]) -> int:
        return sum(self.w[(order[k], order[(k + 1) % len(order)])] for k in range(len(order)))

    def brute_force_cost(self) -> int:
        return min(
            self.tour_cost((1,) + p) for p in itertools.permutations(range(2, self.n + 1))
        )


def tsp_pap(t: TspInstance) -> PAP:
    """Hypothesis ``c(i,j)``: the tour goes from city i straight to city j."""
    hyps = [Atom("c", (i, j)) for i, j in itertools.permutations(range(1, t.n + 1), 2)]
    cities = "".join(f"city({i}).\n" for i in range(1, t.n + 1))
    obs = [_not(Atom("missedCity")), _not(Atom("badTour"))]
    return _pap(hyps, cities + TSP_RULES, obs, {h: t.w[h.args] for h in hyps})


def is_hamiltonian_cycle(n: int, edges) -> bool:
    succ = {}
    for e in edges:
        i, j = e.args if isinstance(e, Atom) else e
        if i in succ:
            return False
        succ[i] = j
    if sorted(succ) != list(range(1, n + 1)) or sorted(succ.values()) != list(range(1, n + 1)):
        return False
    city, seen = 1, set()
    while city not in seen:
        seen.add(city)
        city = succ[city]
    return len(seen) == n


# -- strategic companies --------------------------------------------------

STRATEGIC_RULES = """\
produced(X) :- producedBy(X,Y), controlled(Y).
controlled(X) :- bought(X).
controlled(X) :- share(X,Y,N), controlled(Y), N > 50.
controlled(X) :- share(X,Y,N), share(X,Z,M), controlled(Y), controlled(Z), M + N > 50, Y != Z.
"""


@dataclass(frozen=True)
class MarketInstance:
    shares: frozenset  # (company, owner, percentage): owner holds that share of company
    products: frozenset  # (good, company)
    buy_cost: Mapping[str, int]
    goods: tuple[str, ...]

    def __post_init__(self):
        for x, y, n in self.shares:
            if not 1 <= n <= 100:
                raise PapError("ILLEGAL_INSTANCE", f"share of {y} in {x} is {n}%")

    def controlled_by(self, bought) -> set[str]:
        """Companies controlled after buying ``bought`` (direct fixpoint)."""
        ctrl = set(bought)
        changed = True
        while changed:
            changed = False
            for x in self.buy_cost:
                if x in ctrl:
                    continue
                owned = {y: n for (c, y, n) in self.shares if c == x and y in ctrl}
                ok = any(n > 50 for n in owned.values()) or any(
                    owned[y] + owned[z] > 50 for y, z in itertools.combinations(owned, 2)
                )
                if ok:
                    ctrl.add(x)
                    changed = True
        return ctrl

    def covers_goods(self, bought) -> bool:
        ctrl = self.controlled_by(bought)
        return all(any(c in ctrl for g2, c in self.products if g2 == g) for g in self.goods)


FOOD_MARKET = MarketInstance(
    shares=frozenset(
        {
            ("panino", "barilla", 60),
            ("candia", "barilla", 30),
            ("candia", "frutto", 30),
            ("parmalat", "saiwa", 55),
        }
    ),
    products=frozenset(
        {
            ("pasta", "barilla"),
            ("tomatoes", "frutto"),
            ("bread", "panino"),
            ("milk", "candia"),
            ("milk", "parmalat"),
            ("wine", "parmalat"),
            ("wine", "heineken"),
            ("beer", "heineken"),
            ("beer", "budweiser"),
            ("beer", "saiwa"),
        }
    ),
    buy_cost={
        "barilla": 500,
        "saiwa": 400,
        "frutto": 350,
        "panino": 150,
        "budweiser": 300,
        "heineken": 300,
        "parmalat": 300,
        "candia": 150,
    },
    goods=("pasta", "wine", "tomatoes", "bread", "beer", "milk"),
)


def strategic_pap(m: MarketInstance) -> PAP:
    """Buy companies so that every target good gets produced."""
    lines = [f"share({x},{y},{n})." for x, y, n in sorted(m.shares)]
    lines += [f"producedBy({g},{c})." for g, c in sorted(m.products)]
    hyps = [Atom("bought", (c,)) for c in m.buy_cost]
    obs = [Literal(Atom("produced", (g,))) for g in m.goods]
    return _pap(
        hyps, "\n".join(lines) + "\n" + STRATEGIC_RULES, obs, {h: m.buy_cost[h.args[0]] for h in hyps}
    )


# -- blocks world ---------------------------------------------------------

BLOCKS_RULES = """\
on(B,L,T1) :- move(B,L,T), T1 = T + 1.
on(B,L,T1) :- on(B,L,T), T1 = T + 1, not moved(B,T).
moved(B,T) :- move(B,_,T).
:- on(B,L,T), on(B,L1,T), L != L1.
:- on(B1,B,T), on(B2,B,T), B2 != B1, block(B).
:- on(B,B,T).
:- move(B,B1,T), move(B1,L,T).
:- move(B,L,T), on(B1,B,T), B != B1.
"""

TABLE = "table"


def check_configuration(blocks: Sequence[str], config: Mapping[str, str]) -> None:
    """Every block sits on the table or on another block, at most one block
    per block, and no block is (indirectly) on itself."""
    if set(config) != set(blocks):
        raise PapError("ILLEGAL_CONFIGURATION", "configuration must place every block exactly once")
    below: dict[str, str] = {}
    for b, loc in config.items():
        if loc != TABLE and loc not in config:
            raise PapError("ILLEGAL_CONFIGURATION", f"{b} is on unknown location {loc}")
        if loc != TABLE:
            if loc in below:
                raise PapError("ILLEGAL_CONFIGURATION", f"two blocks on {loc}")
            below[loc] = b
    for b in config:
        seen = set()
        cur = b
        while cur != TABLE:
            if cur in seen:
                raise PapError("ILLEGAL_CONFIGURATION", f"cycle through {b}")
            seen.add(cur)
            cur = config[cur]


@dataclass(frozen=True)
class BlocksInstance:
    blocks: tuple[str, ...]
    start: Mapping[str, str]
    goal: Mapping[str, str]
    last_time: int
    weight: Mapping[str, int] | None = None

    def __post_init__(self):
        if self.last_time < 1:
            raise PapError("ILLEGAL_CONFIGURATION", "lastTime must be at least 1")
        check_configuration(self.blocks, self.start)
        check_configuration(self.blocks, self.goal)


# a on b, b on the table, tower c/d/e/f; goal: the reversed tower f/e/d/c/b/a
TOWER_INSTANCE = BlocksInstance(
    blocks=("a", "b", "c", "d", "e", "f"),
    start={"a": "b", "b": TABLE, "c": "d", "d": "e", "e": "f", "f": TABLE},
    goal={"a": TABLE, "b": "a", "c": "b", "d": "c", "e": "d", "f": "e"},
    last_time=6,
)

# six sequential moves
TOWER_PLAN_6 = (
    ("a", TABLE, 0),
    ("b", "a", 1),
    ("c", "b", 2),
    ("d", "c", 3),
    ("e", "d", 4),
    ("f", "e", 5),
)

# legal but wasteful: c takes a detour over the table
TOWER_PLAN_7 = (
    ("a", TABLE, 0),
    ("c", TABLE, 0),
    ("b", "a", 1),
    ("c", "b", 2),
    ("d", "c", 3),
    ("e", "d", 4),
    ("f", "e", 5),
)


def move_atoms(plan) -> list[Atom]:
    return [Atom("move", (b, loc, t)) for b, loc, t in plan]


def blocksworld_pap(b: BlocksInstance) -> PAP:
    """Hypotheses are all moves ``move(block, location, time)`` before
    lastTime; each costs 1, or the moved block's weight."""
    lines = [f"block({x})." for x in b.blocks]
    lines += [f"on({x},{loc},0)." for x, loc in sorted(b.start.items())]
    locations = list(b.blocks) + [TABLE]
    hyps = [
        Atom("move", (x, loc, t))
        for t in range(b.last_time)
        for x in b.blocks
        for loc in locations
    ]
    gamma = {h: 1 if b.weight is None else b.weight[h.args[0]] for h in hyps}
    obs = [Literal(Atom("on", (x, loc, b.last_time))) for x, loc in sorted(b.goal.items())]
    return _pap(hyps, "\n".join(lines) + "\n" + BLOCKS_RULES, obs, gamma, integer_bound=b.last_time)


def plan_states(b: BlocksInstance, plan) -> list[dict[str, str]] | None:
    """Simulate ``plan``; None if some step is illegal."""
    state = dict(b.start)
    states = [dict(state)]
    for t in range(b.last_time):
        moves = [(x, loc) for x, loc, tt in plan if tt == t]
        movers = [x for x, _ in moves]
        if len(set(movers)) != len(movers):
            return None
        for x, loc in moves:
            if any(state[y] == x for y in state):
                return None  # not clear
            if loc in movers:
                return None  # target moves too
        for x, loc in moves:
            state[x] = loc
        try:
            check_configuration(b.blocks, state)
        except PapError:
            return None
        states.append(dict(state))
    return states


def on_atoms_legal(b: BlocksInstance, model) -> bool:
    """Each time step of a witness model describes a legal configuration."""
    for t in range(b.last_time + 1):
        config: dict[str, str] = {}
        for a in model:
            if a.predicate == "on" and a.args[2] == t:
                if a.args[0] in config:
                    return False
                config[a.args[0]] = a.args[1]
        try:
            check_configuration(b.blocks, config)
        except PapError:
            return False
    return True


# -- CNF satisfiability ---------------------------------------------------


@dataclass(frozen=True)
class CnfInstance:
    """Clauses over variables 1..num_vars; literal ``-j`` is the negation of ``j``."""

    num_vars: int
    clauses: tuple[tuple[int, ...], ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "clauses", tuple(tuple(c) for c in self.clauses))
        for c in self.clauses:
            if not c:
                raise PapError("ILLEGAL_INSTANCE", "empty clause")
            if any(l == 0 or abs(l) > self.num_vars for l in c):
                raise PapError("ILLEGAL_INSTANCE", f"bad literal in {c}")

    def satisfiable(self) -> bool:
        for bits in itertools.product((False, True), repeat=self.num_vars):
            if all(any(bits[abs(l) - 1] == (l > 0) for l in c) for c in self.clauses):
                return True
        return False


def _negate(lit: int) -> str:
    return f"nx({lit})" if lit > 0 else f"x({-lit})"


def sat_pap(f: CnfInstance) -> PAP:
    """Consistent exactly when ``f`` is satisfiable: hypotheses ``x(j)`` and
    ``nx(j)`` pick a truth value per variable at no cost."""
    r = f.num_vars
    lines = [f"contr :- {', '.join(_negate(l) for l in c)}." for c in f.clauses]
    for j in range(1, r + 1):
        lines += [
            f"inconsistent :- x({j}), nx({j}).",
            f"assigned({j}) :- x({j}).",
            f"assigned({j}) :- nx({j}).",
        ]
    if r:
        lines.append("allAssigned :- " + ", ".join(f"assigned({j})" for j in range(1, r + 1)) + ".")
    else:
        lines.append("allAssigned.")
    hyps = [Atom(p, (j,)) for j in range(1, r + 1) for p in ("x", "nx")]
    obs = [_not(Atom("contr")), _not(Atom("inconsistent")), Literal(Atom("allAssigned"))]
    return _pap(hyps, "\n".join(lines) + "\n", obs, {h: 0 for h in hyps})


# -- three-file form ------------------------------------------------------


def pap_texts(pap: PAP) -> tuple[str, str, str]:
    """Program, hypothesis and observation file contents."""
    program = str(pap.program)
    if pap.integer_bound is not None:
        program = f"% solve with --int-bound {pap.integer_bound}\n" + program
    hyp = "".join(f"{h} [{pap.penalty[h]}].\n" for h in pap.hypotheses)
    obs = "".join(f"{o}.\n" for o in pap.observations)
    return program, hyp, obs


def write_pap(pap: PAP, directory: str | Path, stem: str) -> tuple[Path, Path, Path]:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths = tuple(directory / f"{stem}{ext}" for ext in (".dl", ".hyp", ".obs"))
    for path, text in zip(paths, pap_texts(pap)):
        path.write_text(text)
    return paths
