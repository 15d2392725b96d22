import random
from fractions import Fraction as F
from functools import lru_cache

import pytest

from coflow.direct import greedy_schedule
from coflow.model import make_instance
from coflow.oracle import (
    opt_direct_fractional,
    opt_receiver_bound,
    opt_sender_bound,
)

CORPUS_SIZE = 200
CORPUS_VALUES = [F(1, 4), F(1, 3), F(1, 2), F(1), F(3, 2)]


def corpus_instance(k: int):
    """Small random instance #k: n in {2,3,4}, entries from a fixed menu,
    about half the off-diagonal entries zero. Deterministic per k."""
    rng = random.Random(1000 + k)
    n = 2 + k % 3
    while True:
        demands = [
            [
                rng.choice(CORPUS_VALUES) if i != j and rng.random() < 0.5 else F(0)
                for j in range(n)
            ]
            for i in range(n)
        ]
        if any(x > 0 for row in demands for x in row):
            return make_instance(n, demands)


@lru_cache(maxsize=1)
def corpus_runs():
    """(instance, trace, opt_direct, opt_sender, opt_receiver) per corpus
    member; cached so every test shares one set of greedy and LP runs."""
    out = []
    for k in range(CORPUS_SIZE):
        inst = corpus_instance(k)
        _, trace = greedy_schedule(inst)
        out.append(
            (
                inst,
                trace,
                opt_direct_fractional(inst),
                opt_sender_bound(inst),
                opt_receiver_bound(inst),
            )
        )
    return out


@pytest.fixture(scope="session")
def tiny_corpus():
    return corpus_runs()
