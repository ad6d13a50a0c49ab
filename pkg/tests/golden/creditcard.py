# Generated by ozc 0.1.0 from creditcard.oz -- do not edit.
# Source SHA-256: 7cd75b96b2f32ed3b6341a704431958304894f8de1f1f2a1d0ad033220169986

from ozruntime import FrozenConstantViolation, inv, post, pre


@pre(lambda n: isinstance(n, int) and n >= 0, detail="isinstance(n, int) and n >= 0")
def Nat(n):
    return n


@pre(lambda n: isinstance(n, int), detail="isinstance(n, int)")
def Int(n):
    return n


@inv(lambda self: self.limit in {1000, 2000, 3000}, detail="limit in {1000, 2000, 3000}")
@inv(lambda self: self.balance + self.limit >= 0, detail="balance + limit >= 0")
class CreditCard:
    _oz_frozen = ()

    def __init__(self, limit):
        self.limit = Nat(limit)
        self.balance = 0
        self._oz_frozen = ("limit",)

    def __setattr__(self, name, value):
        if name in self._oz_frozen:
            raise FrozenConstantViolation("CreditCard." + name, "constants are frozen after initialization")
        if name == "balance":
            value = Int(value)
        object.__setattr__(self, name, value)

    @pre(lambda self, amount: amount <= self.balance + self.limit, detail="amount? <= balance + limit")
    def withdraw(self, amount):
        amount = Nat(amount)
        self.balance = self.balance - amount

    def deposit(self, amount):
        amount = Nat(amount)
        self.balance = self.balance + amount

    @post(lambda old, result: result == old.balance + old.limit, detail="amount! = balance + limit")
    def withdrawAvail(self):
        amount = self.balance + self.limit
        self.balance = 0 - self.limit
        return amount

    withdrawAvail._oz_outputs = ("amount",)
