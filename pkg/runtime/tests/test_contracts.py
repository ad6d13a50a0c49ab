"""Contract runtime suite: pre/post/inv wrappers, frames, frozen
constants, snapshots, and the validators, exercised over both generated
corpus classes and hand-written doubles."""

from __future__ import annotations

import pytest

import ozruntime
from ozruntime import (
    ContractViolation,
    FrameViolation,
    FrozenConstantViolation,
    Int,
    InvariantViolation,
    Nat,
    OldSnapshot,
    PostconditionViolation,
    PreconditionViolation,
    inv,
    pos,
    post,
    pre,
    snapshot,
)


# --- preconditions -----------------------------------------------------------


def test_withdraw_within_limit_runs(generated):
    card = generated.creditcard.CreditCard(1000)
    card.withdraw(amount=500)
    assert card.balance == -500


def test_withdraw_beyond_limit_raises_precondition(generated):
    card = generated.creditcard.CreditCard(1000)
    with pytest.raises(PreconditionViolation) as err:
        card.withdraw(amount=1500)
    assert err.value.kind == "precondition"
    assert "withdraw" in err.value.subject
    assert card.balance == 0  # guard failed before any state change


def test_precondition_binds_named_arguments():
    @pre(lambda a, b: a < b, detail="a < b")
    def f(a, b):
        return a + b

    assert f(1, 2) == 3
    with pytest.raises(PreconditionViolation):
        f(2, 1)


def test_crashing_predicate_is_a_violation():
    @pre(lambda a: a.nope, detail="broken predicate")
    def f(a):
        return a

    with pytest.raises(PreconditionViolation):
        f(1)


def test_stacked_preconditions_check_outermost_first():
    order = []

    def tracking(tag, value):
        def predicate(x):
            order.append(tag)
            return value

        return predicate

    @pre(tracking("outer", True))
    @pre(tracking("inner", False))
    def f(x):
        return x

    with pytest.raises(PreconditionViolation):
        f(1)
    assert order == ["outer", "inner"]


# --- postconditions and frames --------------------------------------------------


def test_postcondition_sees_old_and_result():
    class Cell:
        def __init__(self, v):
            self.v = v

        @post(lambda self, old, result: result == old.v, detail="result = v")
        def read_and_bump(self):
            value = self.v
            self.v = value + 1
            return value

    cell = Cell(41)
    assert cell.read_and_bump() == 41
    assert cell.v == 42


def test_failing_postcondition_raises():
    class Cell:
        def __init__(self, v):
            self.v = v

        @post(lambda self, old: self.v == old.v + 1, detail="v' = v + 1")
        def bad_bump(self):
            self.v += 2

    with pytest.raises(PostconditionViolation):
        Cell(0).bad_bump()


def test_frame_check_passes_when_var_untouched():
    class Box:
        def __init__(self):
            self.a = 0
            self.b = 0

        @post(lambda self, old: self.b == old.b, detail="b' = b", frame=True)
        def bump_a(self):
            self.a += 1

    box = Box()
    box.bump_a()
    assert (box.a, box.b) == (1, 0)


def test_injected_non_delta_mutation_raises_frame_violation():
    class Box:
        def __init__(self):
            self.a = 0
            self.b = 0

        @post(lambda self, old: self.b == old.b, detail="b' = b", frame=True)
        def buggy_bump(self):
            self.a += 1
            self.b += 1  # mutates outside its delta list

    with pytest.raises(FrameViolation) as err:
        Box().buggy_bump()
    assert err.value.kind == "frame"
    assert "b" in err.value.detail


def test_generated_reporting_op_checks_result_and_frame(generated):
    account = generated.account.Account(1000)
    account.deposit(amount=250)
    assert account.printBal() == 250
    assert account.balance == 250  # frame held


def test_pos_is_an_alias_for_post():
    assert pos is post


# --- invariants ------------------------------------------------------------------


def test_invariants_checked_on_entry_and_exit(generated):
    card = generated.creditcard.CreditCard(1000)
    card.deposit(amount=100)
    assert card.balance == 100


def test_constructing_with_bad_constant_raises_invariant(generated):
    with pytest.raises(InvariantViolation) as err:
        generated.creditcard.CreditCard(999)
    assert err.value.kind == "invariant"
    assert "limit" in err.value.detail


def test_invariant_predicate_evaluated_exactly_twice_per_call():
    counter = {"n": 0}

    def counting(instance):
        counter["n"] += 1
        return instance.x >= 0

    @inv(counting, detail="x >= 0")
    class K:
        def __init__(self):
            self.x = 0

        def poke(self):
            self.x += 1

    k = K()
    assert counter["n"] == 1  # constructor: exit only
    counter["n"] = 0
    k.poke()
    assert counter["n"] == 2  # entry + exit


def test_reentrant_internal_calls_do_not_recheck():
    counter = {"n": 0}

    def counting(instance):
        counter["n"] += 1
        return True

    @inv(counting)
    class K:
        def __init__(self):
            self.x = 0

        def outer(self):
            self.inner()

        def inner(self):
            self.x += 1

    k = K()
    counter["n"] = 0
    k.outer()
    assert counter["n"] == 2  # outer entry + exit; inner suppressed


def test_stacked_invariants_check_outermost_first():
    order = []

    def tracking(tag):
        def predicate(instance):
            order.append(tag)
            return True

        return predicate

    @inv(tracking("outer"))
    @inv(tracking("inner"))
    class K:
        def __init__(self):
            pass

    K()
    assert order == ["outer", "inner"]


def test_violation_does_not_trigger_exit_checks(generated):
    card = generated.creditcard.CreditCard(1000)
    with pytest.raises(PreconditionViolation):
        card.withdraw(amount=5000)
    assert card.balance == 0


def test_entry_check_catches_externally_corrupted_state(generated):
    card = generated.creditcard.CreditCard(1000)
    card.balance = -5000  # attribute writes bypass method-level invariant checks
    with pytest.raises(InvariantViolation):
        card.deposit(amount=1)


# --- the secondary updater ---------------------------------------------------


def _count_updates(pair):
    counter = {"n": 0}
    original = pair._update_secondary

    def counting():
        counter["n"] += 1
        original()

    pair.__dict__["_update_secondary"] = counting
    return counter


def test_updater_runs_exactly_once_per_public_call(generated):
    pair = generated.twocards.TwoCards(1000, 1000)
    counter = _count_updates(pair)
    pair.deposit1(amount=10)
    pair.deposit1(amount=10)
    assert counter["n"] == 2
    assert pair.totalbalance == 20


def test_updater_not_run_when_call_fails(generated):
    pair = generated.twocards.TwoCards(1000, 1000)
    counter = _count_updates(pair)
    with pytest.raises(PreconditionViolation):
        pair.withdraw1(amount=12345)
    assert counter["n"] == 0
    assert pair.totalbalance == 0


def test_decorate_all_accepts_a_callable_updater():
    seen = []

    def refresh(instance):
        seen.append(instance.v)

    from ozruntime import decorate_all

    @decorate_all(refresh)
    class K:
        def __init__(self):
            self.v = 1

        def bump(self):
            self.v += 1

    k = K()
    k.bump()
    assert seen == [1, 2]


# --- frozen constants ------------------------------------------------------------


def test_constants_frozen_after_init(generated):
    card = generated.creditcard.CreditCard(2000)
    assert card.limit == 2000
    with pytest.raises(FrozenConstantViolation) as err:
        card.limit = 3000
    assert err.value.kind == "frozen-constant"
    assert err.value.subject == "CreditCard.limit"
    assert card.limit == 2000


def test_state_vars_revalidated_on_assignment(generated):
    card = generated.creditcard.CreditCard(1000)
    with pytest.raises(PreconditionViolation):
        card.balance = "not an int"
    card.balance = -400
    assert card.balance == -400


# --- validators --------------------------------------------------------------------


def test_runtime_validators():
    assert Nat(0) == 0
    assert Nat(3000) == 3000
    assert Int(-500) == -500
    with pytest.raises(PreconditionViolation):
        Nat(-1)
    with pytest.raises(PreconditionViolation):
        Nat(2.5)
    with pytest.raises(PreconditionViolation):
        Int("7")


def test_generated_validator_names_itself(generated):
    with pytest.raises(PreconditionViolation) as err:
        generated.creditcard.Nat(-1)
    assert err.value.subject == "Nat"
    assert generated.creditcard.Nat(7) == 7


# --- snapshots ----------------------------------------------------------------------


def test_snapshot_isolation(generated):
    card = generated.creditcard.CreditCard(1000)
    old = snapshot(card)
    card.deposit(amount=300)
    assert old.balance == 0
    assert card.balance == 300


def test_snapshot_of_snapshot_is_identity(generated):
    card = generated.creditcard.CreditCard(1000)
    old = snapshot(card)
    assert snapshot(old) is old


def test_snapshot_of_member_objects_one_level_deep(generated):
    pair = generated.twocards.TwoCards(1000, 1000)
    old = snapshot(pair)
    pair.deposit1(amount=100)
    assert old.c1.balance == 0
    assert isinstance(old.c1, OldSnapshot)
    assert old.totalbalance == 0


def test_snapshot_equality_against_live_object(generated):
    pair = generated.twocards.TwoCards(1000, 1000)
    old = snapshot(pair)
    assert old == pair
    pair.deposit1(amount=10)
    assert old != pair


def test_snapshots_are_immutable(generated):
    old = snapshot(generated.creditcard.CreditCard(1000))
    with pytest.raises(AttributeError):
        old.balance = 99


def test_snapshot_detects_added_attributes():
    class Bag:
        def __init__(self):
            self.x = 1

    bag = Bag()
    old = snapshot(bag)
    assert old == bag
    bag.extra = True
    assert old != bag


# --- wrapper transparency --------------------------------------------------------------


def test_wrapped_and_unwrapped_agree_for_valid_inputs(generated):
    class PlainCard:
        def __init__(self, limit):
            self.limit = limit
            self.balance = 0

        def withdraw(self, amount):
            self.balance = self.balance - amount

        def deposit(self, amount):
            self.balance = self.balance + amount

        def withdrawAvail(self):
            amount = self.balance + self.limit
            self.balance = 0 - self.limit
            return amount

    for amounts in ((100,), (700, 200), (0, 1000)):
        wrapped = generated.creditcard.CreditCard(1000)
        plain = PlainCard(1000)
        for amount in amounts:
            wrapped.deposit(amount=amount)
            plain.deposit(amount=amount)
            wrapped.withdraw(amount=amount)
            plain.withdraw(amount=amount)
        assert wrapped.balance == plain.balance
        assert wrapped.withdrawAvail() == plain.withdrawAvail()
        assert wrapped.balance == plain.balance


# --- violation hierarchy ------------------------------------------------------------------


def test_every_violation_names_subject_and_kind():
    kinds = {
        PreconditionViolation: "precondition",
        PostconditionViolation: "postcondition",
        InvariantViolation: "invariant",
        FrameViolation: "frame",
        FrozenConstantViolation: "frozen-constant",
    }
    for cls, kind in kinds.items():
        err = cls("Subject.method", "some predicate")
        assert isinstance(err, ContractViolation)
        assert err.kind == kind
        assert err.subject == "Subject.method"
        assert "some predicate" in str(err)


def test_module_exports_exactly_the_documented_names():
    expected = {
        "pre", "post", "pos", "inv", "decorate_all",
        "choice", "sequential", "parallel", "conjunction",
        "Nat", "Int", "rng",
        "ContractViolation", "PreconditionViolation", "PostconditionViolation",
        "InvariantViolation", "FrameViolation", "FrozenConstantViolation",
    }
    assert set(ozruntime.__all__) == expected
