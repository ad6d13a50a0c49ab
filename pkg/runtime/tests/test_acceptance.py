"""Acceptance suite for the contract runtime, driven through corpus
modules built by the compiler CLI.

  1. contract runtime  - precondition/invariant/frame violations fire
     where required; the invariant counter observes entry+exit
  2. combinators       - seeded choice coverage and fallback, output
     piping, guard atomicity under snapshot comparison
  3. end-to-end        - the TwoCards transfer/deposit scenario matches
     an oracle that evaluates the card predicates over explicit state
     tuples

Run with `pytest tests/test_acceptance.py -v -s` to see the PASS lines.
"""

from __future__ import annotations

import pytest

import ozruntime
from ozruntime import (
    FrameViolation,
    InvariantViolation,
    PreconditionViolation,
    choice,
    inv,
    post,
    sequential,
    snapshot,
)


def test_contract_runtime_suite(generated):
    card = generated.creditcard.CreditCard(1000)
    with pytest.raises(PreconditionViolation):
        card.withdraw(amount=1500)
    assert card.balance == 0

    card.withdraw(amount=500)
    assert card.balance == -500

    with pytest.raises(InvariantViolation):
        generated.creditcard.CreditCard(999)

    class Box:
        def __init__(self):
            self.a = 0
            self.b = 0

        @post(lambda self, old: self.b == old.b, detail="b' = b", frame=True)
        def buggy(self):
            self.a += 1
            self.b += 1

    with pytest.raises(FrameViolation):
        Box().buggy()

    counter = {"n": 0}

    def counting(instance):
        counter["n"] += 1
        return True

    @inv(counting)
    class K:
        def __init__(self):
            self.x = 0

        def poke(self):
            self.x += 1

    k = K()
    counter["n"] = 0
    k.poke()
    assert counter["n"] == 2
    print("PASS contract-runtime: violations fire; invariant counter = 2 per call")


def test_combinator_suite(generated):
    ozruntime.rng.seed(7)
    branches = set()
    for _ in range(200):
        pair = generated.twocards.TwoCards(1000, 1000)
        pair.withdrawEither(amount=100)
        branches.add("c1" if pair.c1.balance == -100 else "c2")
    assert branches == {"c1", "c2"}

    orders = []
    for seed in range(1000):
        ozruntime.rng.seed(seed)
        first_draw = ozruntime.rng.random() < 0.5
        if first_draw not in orders:
            orders.append(first_draw)
            ozruntime.rng.seed(seed)
            rich = generated.creditcard.CreditCard(3000)
            poor = generated.creditcard.CreditCard(1000)
            choice(poor.withdraw, rich.withdraw)(amount=2500)
            assert poor.balance == 0 and rich.balance == -2500
        if len(orders) == 2:
            break
    assert len(orders) == 2

    source = generated.creditcard.CreditCard(1000)
    target = generated.creditcard.CreditCard(1000)
    source.withdraw(amount=300)  # avail becomes 700
    sequential(source.withdrawAvail, target.deposit)()
    assert target.balance == 700

    pair = generated.twocards.TwoCards(1000, 1000)
    before = snapshot(pair)
    with pytest.raises(PreconditionViolation):
        pair.transfer(amount=1500)  # withdraw guard fails
    assert before == pair

    card1 = generated.creditcard.CreditCard(1000)
    card2 = generated.creditcard.CreditCard(1000)
    snap1, snap2 = snapshot(card1), snapshot(card2)

    @ozruntime.pre(lambda amount: amount <= 0, detail="amount? <= 0")
    def fussy(amount):
        raise AssertionError("never runs")

    with pytest.raises(PreconditionViolation):
        ozruntime.parallel(card1.withdraw, fussy)(amount=100)
    assert snap1 == card1 and snap2 == card2
    print("PASS combinators: choice coverage/fallback, 700 piped, guards atomic")


def test_end_to_end_scenario(generated):
    two = generated.twocards.TwoCards(1000, 1000)
    two.transfer(amount=300)
    assert two.c1.balance == -300
    assert two.c2.balance == 300
    assert two.totalbalance == 0

    fresh = generated.twocards.TwoCards(1000, 1000)
    fresh.deposit1(amount=100)
    assert fresh.totalbalance == 100

    # Desk oracle over explicit state tuples: (balance1, balance2), limits 1000.
    def oracle_transfer(state, amount):
        b1, b2 = state
        if not (isinstance(amount, int) and amount >= 0):
            return False, state
        if not amount <= b1 + 1000:
            return False, state
        new = (b1 - amount, b2 + amount)
        if new[0] + 1000 < 0 or new[1] + 1000 < 0:
            return False, state
        return True, new

    def oracle_deposit1(state, amount):
        b1, b2 = state
        if not (isinstance(amount, int) and amount >= 0):
            return False, state
        return True, (b1 + amount, b2)

    ok, state = oracle_transfer((0, 0), 300)
    assert ok and state == (-300, 300)
    assert (two.c1.balance, two.c2.balance) == state
    assert two.totalbalance == sum(state)

    ok, state = oracle_deposit1((0, 0), 100)
    assert ok and state == (100, 0)
    assert (fresh.c1.balance, fresh.c2.balance) == state
    assert fresh.totalbalance == sum(state)
    print("PASS end-to-end: transfer/deposit scenario matches the state-tuple oracle")
