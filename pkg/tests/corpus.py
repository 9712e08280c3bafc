"""Seeded random PAPs over propositional programs with negation."""

from __future__ import annotations

import random

from pap.abduction import PAP
from pap.syntax import Atom, Literal, Program, Rule


def random_pap(rng: random.Random, max_hyps: int = 5, max_atoms: int = 10) -> PAP:
    n_h = rng.randint(0, max_hyps)
    n_p = rng.randint(1, max_atoms - n_h)
    hyps = [Atom(f"h{i}") for i in range(n_h)]
    plain = [Atom(f"p{i}") for i in range(n_p)]
    every = hyps + plain
    rules = []
    for _ in range(rng.randint(1, 2 * n_p + 2)):
        size = rng.randint(0, 3)
        body = tuple(Literal(rng.choice(every), rng.random() < 0.6) for _ in range(size))
        head = None if rng.random() < 0.08 else rng.choice(plain)
        if head is None and not body:
            continue
        rules.append(Rule(head, body))
    obs = [Literal(rng.choice(every), rng.random() < 0.6) for _ in range(rng.randint(0, 2))]
    penalty = {h: rng.randint(0, 5) for h in hyps}
    return PAP(tuple(hyps), Program(tuple(rules)), tuple(obs), penalty)


def corpus(count: int = 200, seed: int = 20240601) -> list[PAP]:
    rng = random.Random(seed)
    return [random_pap(rng) for _ in range(count)]
