"""ozruntime: contract enforcement for generated Object-Z translations.

Wrappers check preconditions, postconditions, frame conditions, and
class invariants at runtime; `decorate_all` re-derives secondary
variables after every public call; `choice`/`sequential`/`parallel`/
`conjunction` compose operations.

Composite operations are NOT transactional: when a later step fails,
completed state changes of earlier steps are kept. `parallel` and
`conjunction` check both guards up front, so a guard failure leaves
state untouched, but a postcondition or invariant failure mid-composite
does not roll anything back.

Predicates receive named arguments. A predicate's parameter names are
matched against the call's bound arguments plus `self` (the instance)
and, for postconditions, `old` (an entry-time snapshot) and `result`.

Not thread-safe per instance: call-depth tracking and snapshots assume
one thread per object. Distinct instances may be used from distinct
threads.
"""

from __future__ import annotations

import functools
import inspect
import random as _random

__all__ = [
    "pre",
    "post",
    "pos",
    "inv",
    "decorate_all",
    "choice",
    "sequential",
    "parallel",
    "conjunction",
    "Nat",
    "Int",
    "ContractViolation",
    "PreconditionViolation",
    "PostconditionViolation",
    "InvariantViolation",
    "FrameViolation",
    "FrozenConstantViolation",
    "rng",
]

#: Seedable randomness source used by `choice`; call rng.seed(n) in tests.
rng = _random.Random()

_INTERNAL_PREFIX = "_oz_"


# --- violation hierarchy ----------------------------------------------------


class ContractViolation(Exception):
    """Base of all contract failures. kind/subject/detail identify the check."""

    kind = "contract"

    def __init__(self, subject: str, detail: str = "") -> None:
        self.subject = subject
        self.detail = detail
        message = f"{self.kind} violation in {subject}"
        if detail:
            message += f": {detail}"
        super().__init__(message)


class PreconditionViolation(ContractViolation):
    kind = "precondition"


class PostconditionViolation(ContractViolation):
    kind = "postcondition"


class InvariantViolation(ContractViolation):
    kind = "invariant"


class FrameViolation(ContractViolation):
    kind = "frame"


class FrozenConstantViolation(ContractViolation):
    kind = "frozen-constant"


# --- old-state snapshots ------------------------------------------------------


class OldSnapshot:
    """Immutable copy of an instance's state taken at public-method entry.

    Attribute values are copied shallowly; values that are themselves
    plain objects (member objects) are snapshotted one level deep.
    Comparing a snapshot against a live object compares the recorded
    fields against the object's current attributes.
    """

    __slots__ = ("_fields",)

    def __init__(self, fields: dict) -> None:
        object.__setattr__(self, "_fields", fields)

    def __getattr__(self, name: str):
        try:
            return object.__getattribute__(self, "_fields")[name]
        except KeyError:
            raise AttributeError(name) from None

    def __setattr__(self, name: str, value) -> None:
        raise AttributeError("snapshots are immutable")

    def __eq__(self, other) -> bool:
        fields = object.__getattribute__(self, "_fields")
        if isinstance(other, OldSnapshot):
            return fields == object.__getattribute__(other, "_fields")
        if hasattr(other, "__dict__"):
            # Snapshot the live object so added or removed attributes count
            # as differences, not just changed ones.
            return object.__getattribute__(snapshot(other), "_fields") == fields
        return NotImplemented

    def __repr__(self) -> str:
        fields = object.__getattribute__(self, "_fields")
        inner = ", ".join(f"{k}={v!r}" for k, v in fields.items())
        return f"OldSnapshot({inner})"


def _is_plain_object(value) -> bool:
    if isinstance(value, (type, OldSnapshot)) or callable(value):
        return False
    return hasattr(value, "__dict__")


def snapshot(obj):
    """Snapshot an instance; snapshotting a snapshot returns it unchanged."""
    if isinstance(obj, OldSnapshot):
        return obj
    fields = {}
    for name, value in vars(obj).items():
        if name.startswith(_INTERNAL_PREFIX):
            continue
        if _is_plain_object(value):
            inner = {
                k: v for k, v in vars(value).items() if not k.startswith(_INTERNAL_PREFIX)
            }
            fields[name] = OldSnapshot(inner)
        else:
            fields[name] = value
    return OldSnapshot(fields)


# --- predicate plumbing ----------------------------------------------------------


def _subject_of(func) -> str:
    return getattr(func, "__qualname__", getattr(func, "__name__", repr(func)))


def _bind_arguments(func, args, kwargs) -> dict:
    bound = inspect.signature(func).bind(*args, **kwargs)
    bound.apply_defaults()
    return dict(bound.arguments)


def _predicate_params(predicate):
    """(names, wants_all): declared parameter names, or everything on **kwargs."""
    try:
        sig = inspect.signature(predicate)
    except (TypeError, ValueError):
        return None, True
    names = []
    wants_all = False
    for param in sig.parameters.values():
        if param.kind is param.VAR_KEYWORD:
            wants_all = True
        elif param.kind in (param.POSITIONAL_OR_KEYWORD, param.KEYWORD_ONLY):
            names.append(param.name)
    return names, wants_all


def _evaluate(predicate, bindings: dict, partial: bool):
    """Returns (evaluated, ok). In partial mode, predicates whose parameters
    are not all bindable are skipped instead of failing; composition guards
    use this so checks over piped-in values wait for the actual call."""
    names, wants_all = _predicate_params(predicate)
    if wants_all or names is None:
        kwargs = dict(bindings)
    else:
        missing = [n for n in names if n not in bindings]
        if missing and partial:
            return False, True
        kwargs = {n: bindings[n] for n in names if n in bindings}
    try:
        return True, bool(predicate(**kwargs))
    except ContractViolation:
        return True, False
    except Exception:
        return True, False


# --- pre / post ------------------------------------------------------------------


def pre(predicate, detail: str | None = None):
    """Check `predicate` against the named call arguments before the target
    runs. A false or crashing predicate raises PreconditionViolation."""

    def decorate(func):
        @functools.wraps(func)
        def wrapper(*args, **kwargs):
            bindings = _bind_arguments(func, args, kwargs)
            evaluated, ok = _evaluate(predicate, bindings, partial=False)
            if not ok or not evaluated:
                raise PreconditionViolation(_subject_of(func), detail or "precondition")
            return func(*args, **kwargs)

        inherited = getattr(func, "_oz_pre_predicates", ())
        wrapper._oz_pre_predicates = ((predicate, detail),) + tuple(inherited)
        return wrapper

    return decorate


def post(predicate, detail: str | None = None, frame: bool = False):
    """Snapshot state at entry, run the target, then check `predicate`
    against (old, result, arguments). `frame=True` raises FrameViolation
    instead of PostconditionViolation."""

    violation = FrameViolation if frame else PostconditionViolation

    def decorate(func):
        @functools.wraps(func)
        def wrapper(*args, **kwargs):
            bindings = _bind_arguments(func, args, kwargs)
            instance = bindings.get("self")
            old = snapshot(instance) if instance is not None else None
            result = func(*args, **kwargs)
            bindings["old"] = old
            bindings["result"] = result
            evaluated, ok = _evaluate(predicate, bindings, partial=False)
            if not ok or not evaluated:
                raise violation(_subject_of(func), detail or "postcondition")
            return result

        return wrapper

    return decorate


pos = post  # historical alias


# --- class wrappers: invariants and the secondary updater ----------------------------


def _check_invariants(cls, instance, method_name: str) -> None:
    for predicate, detail in cls.__dict__.get("_oz_invariants", ()):
        try:
            ok = bool(predicate(instance))
        except ContractViolation:
            ok = False
        except Exception:
            ok = False
        if not ok:
            raise InvariantViolation(cls.__name__, detail or "invariant")


def _run_updater(cls, instance) -> None:
    updater = cls.__dict__.get("_oz_updater")
    if updater is None:
        return
    if isinstance(updater, str):
        getattr(instance, updater)()
    else:
        updater(instance)


def _guarded(cls, name: str, method):
    @functools.wraps(method)
    def wrapper(self, *args, **kwargs):
        depth = getattr(self, "_oz_depth", 0)
        if depth == 0 and name != "__init__":
            _check_invariants(cls, self, name)
        object.__setattr__(self, "_oz_depth", depth + 1)
        try:
            result = method(self, *args, **kwargs)
        finally:
            object.__setattr__(self, "_oz_depth", depth)
        # Only a normal return triggers the updater and exit checks; a
        # failing call must not mask its own violation.
        if depth == 0:
            _run_updater(cls, self)
            _check_invariants(cls, self, name)
        return result

    return wrapper


def _install_machinery(cls) -> None:
    """Wrap the class's public methods once; `inv` and `decorate_all` both
    route through this so stacking them composes instead of re-wrapping."""
    if "_oz_wrapped" in cls.__dict__:
        return
    cls._oz_wrapped = True
    if "_oz_invariants" not in cls.__dict__:
        cls._oz_invariants = ()
    if "_oz_updater" not in cls.__dict__:
        cls._oz_updater = None
    for name, attr in list(cls.__dict__.items()):
        if isinstance(attr, (staticmethod, classmethod, property, type)):
            continue
        if not callable(attr):
            continue
        if name.startswith("_") and name != "__init__":
            continue
        setattr(cls, name, _guarded(cls, name, attr))
    if "__init__" not in cls.__dict__:
        # Constructed instances must still get their exit checks.
        def _default_init(self):
            pass

        _default_init.__name__ = "__init__"
        _default_init.__qualname__ = f"{cls.__name__}.__init__"
        cls.__init__ = _guarded(cls, "__init__", _default_init)


def inv(predicate, detail: str | None = None):
    """Class wrapper: every public method checks `predicate(instance)` at
    entry and exit of the outermost call; constructors check at exit only.
    Stacked `inv` wrappers all check, outermost first."""

    def decorate(cls):
        _install_machinery(cls)
        existing = cls.__dict__.get("_oz_invariants", ())
        cls._oz_invariants = ((predicate, detail),) + tuple(existing)
        return cls

    return decorate


def decorate_all(updater):
    """Class wrapper: after every public method (constructor included)
    returns normally, run `updater` once. `updater` is a method name or a
    callable taking the instance; it runs before exit-invariant checks and
    is itself exempt from wrapping."""

    def decorate(cls):
        _install_machinery(cls)
        cls._oz_updater = updater
        return cls

    return decorate


# --- operation combinators --------------------------------------------------------------


def _unwrap(op):
    instance = getattr(op, "__self__", None)
    func = getattr(op, "__func__", op)
    return func, instance


def _accepted_args(op, kwargs: dict) -> dict:
    """The subset of kwargs the operation's signature accepts."""
    try:
        sig = inspect.signature(op)
    except (TypeError, ValueError):
        return dict(kwargs)
    names = set()
    for param in sig.parameters.values():
        if param.kind is param.VAR_KEYWORD:
            return dict(kwargs)
        if param.kind in (param.POSITIONAL_OR_KEYWORD, param.KEYWORD_ONLY):
            names.add(param.name)
    return {k: v for k, v in kwargs.items() if k in names}


def _input_names(op) -> tuple[set, bool]:
    try:
        sig = inspect.signature(op)
    except (TypeError, ValueError):
        return set(), True
    names = set()
    var_kw = False
    for param in sig.parameters.values():
        if param.kind is param.VAR_KEYWORD:
            var_kw = True
        elif param.kind in (param.POSITIONAL_OR_KEYWORD, param.KEYWORD_ONLY):
            names.add(param.name)
    return names, var_kw


def _output_meta(op) -> tuple | None:
    return getattr(op, "_oz_outputs", None)


def _named_outputs(op, result) -> dict:
    """Map an operation's return value to named outputs for piping. Needs
    `_oz_outputs` metadata (generated code carries it) or a dict result."""
    meta = _output_meta(op)
    if meta:
        if len(meta) == 1:
            return {meta[0]: result}
        return dict(result) if isinstance(result, dict) else {}
    if isinstance(result, dict):
        return dict(result)
    return {}


def _merge_result(outputs: dict):
    if not outputs:
        return None
    if len(outputs) == 1:
        return next(iter(outputs.values()))
    return dict(outputs)


def _merged_meta(*ops) -> tuple | None:
    names: dict = {}
    for op in ops:
        meta = _output_meta(op)
        if meta is None:
            continue
        for name in meta:
            names.setdefault(name)
    return tuple(names) if names else None


def _check_enabled(op, kwargs: dict) -> None:
    """Evaluate the operation's preconditions without running it. Predicates
    whose parameters are not bindable from kwargs (they wait on piped
    values) are deferred to the actual call."""
    func, instance = _unwrap(op)
    predicates = getattr(func, "_oz_pre_predicates", ())
    if not predicates:
        return
    bindings = dict(kwargs)
    if instance is not None:
        bindings["self"] = instance
    for predicate, detail in predicates:
        evaluated, ok = _evaluate(predicate, bindings, partial=True)
        if evaluated and not ok:
            raise PreconditionViolation(_subject_of(func), detail or "precondition")


def _pipe(op2, kwargs: dict, outputs: dict) -> dict:
    args = _accepted_args(op2, kwargs)
    names, var_kw = _input_names(op2)
    for name, value in outputs.items():
        if var_kw or name in names:
            args[name] = value
    return args


def choice(op1, op2):
    """Run one of the two operations, random order, falling back to the
    other when the first is disabled (raises PreconditionViolation)."""

    def combined(**kwargs):
        first, second = (op1, op2) if rng.random() < 0.5 else (op2, op1)
        try:
            return first(**_accepted_args(first, kwargs))
        except PreconditionViolation:
            try:
                return second(**_accepted_args(second, kwargs))
            except PreconditionViolation as exc:
                raise PreconditionViolation("choice", "both operations are disabled") from exc

    meta = _output_meta(op1)
    if meta is not None and meta == _output_meta(op2):
        combined._oz_outputs = meta
    return combined


def sequential(op1, op2):
    """Run op1, feed its outputs into op2's same-named inputs, run op2,
    and merge the outputs (op2's win on collision). op1's state changes
    are kept even when op2 fails."""

    def combined(**kwargs):
        r1 = op1(**_accepted_args(op1, kwargs))
        outputs1 = _named_outputs(op1, r1)
        r2 = op2(**_pipe(op2, kwargs, outputs1))
        outputs2 = _named_outputs(op2, r2)
        return _merge_result({**outputs1, **outputs2})

    meta = _merged_meta(op1, op2)
    if meta is not None:
        combined._oz_outputs = meta
    return combined


def parallel(op1, op2):
    """Conjoined operations with piping: both preconditions are checked
    against the original arguments before either body runs, then op1's
    outputs feed op2's same-named inputs."""

    def combined(**kwargs):
        _check_enabled(op1, kwargs)
        _check_enabled(op2, kwargs)
        r1 = op1(**_accepted_args(op1, kwargs))
        outputs1 = _named_outputs(op1, r1)
        r2 = op2(**_pipe(op2, kwargs, outputs1))
        outputs2 = _named_outputs(op2, r2)
        return _merge_result({**outputs1, **outputs2})

    meta = _merged_meta(op1, op2)
    if meta is not None:
        combined._oz_outputs = meta
    return combined


def conjunction(op1, op2):
    """Both operations applied over the same argument bindings, no piping;
    both preconditions are checked before either body runs."""

    def combined(**kwargs):
        _check_enabled(op1, kwargs)
        _check_enabled(op2, kwargs)
        r1 = op1(**_accepted_args(op1, kwargs))
        r2 = op2(**_accepted_args(op2, kwargs))
        return _merge_result({**_named_outputs(op1, r1), **_named_outputs(op2, r2)})

    meta = _merged_meta(op1, op2)
    if meta is not None:
        combined._oz_outputs = meta
    return combined


# --- base-type validators --------------------------------------------------------


@pre(lambda n: isinstance(n, int) and n >= 0, detail="isinstance(n, int) and n >= 0")
def Nat(n):
    return n


@pre(lambda n: isinstance(n, int), detail="isinstance(n, int)")
def Int(n):
    return n
