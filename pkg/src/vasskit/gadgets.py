"""Gadget constructors and compiler passes.

Every constructor returns a complete, validated system; generated states
carry the reserved "#" prefix so they can never collide with caller states.
Compiler passes preserve reachability between the original states for
counter values in the original range.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import (
    Branch,
    Configuration,
    Double,
    EQ,
    GE,
    Halve,
    LE,
    System,
    Test,
    Transition,
    Unary,
    VassError,
    rename_states,
    validate_system,
)


class GadgetError(VassError):
    """A gadget or compiler precondition is violated."""


class TestValueExceedsBound(GadgetError):
    pass


class UpperTestWithoutBound(GadgetError):
    pass


class BoundDecrease(GadgetError):
    pass


class NotDimensionOne(GadgetError):
    pass


class BoundNotPowerOfTwoMinusOne(GadgetError):
    pass


class NotPowerOfTwo(GadgetError):
    pass


@dataclass(frozen=True)
class GadgetHandle:
    """A constructed system with its designated entry and exit states."""

    system: System
    entry: str
    exits: tuple[str, ...]
    declared_bound: int

    def __post_init__(self):
        assert self.entry in self.system.state_index
        assert all(e in self.system.state_index for e in self.exits)
        assert self.declared_bound == self.system.bound


class _Names:
    """Fresh state names: '#' + gadget tag + counter, skipping collisions."""

    def __init__(self, taken, tag: str):
        self._taken = set(taken)
        self._tag = tag
        self._next = 0

    def fresh(self) -> str:
        while True:
            name = f"#{self._tag}{self._next}"
            self._next += 1
            if name not in self._taken:
                self._taken.add(name)
                return name


def _fresh_name(taken, base: str) -> str:
    if base not in taken:
        return base
    k = 1
    while f"{base}~{k}" in taken:
        k += 1
    return f"{base}~{k}"


def _finish(sys: System) -> System:
    report = validate_system(sys)
    assert report.ok, report.problems
    return sys


def _axis(dimension: int, counter: int, value: int) -> tuple[int, ...]:
    return tuple(value if i == counter - 1 else 0 for i in range(dimension))


# ---------------------------------------------------------------------------
# Test desugaring and bound raising


def desugar_tests(sys: System) -> System:
    """Replace each test by plain additions through fresh states.

    c >= n becomes -n then +n; c <= n becomes +(B-n) then -(B-n); c = n
    becomes the lower test followed by the upper one, with the middle state
    elided: -n, +B, -(B-n) through two fresh states.
    """
    names = _Names(sys.states, "ds")
    new_states = list(sys.states)
    new_transitions: list[Transition] = []
    for t in sys.transitions:
        if not isinstance(t, Test):
            new_transitions.append(t)
            continue
        if t.op in (LE, EQ):
            if sys.bound is None:
                raise UpperTestWithoutBound(f"cannot desugar {t.op!r} test without a bound")
            if t.value > sys.bound:
                raise TestValueExceedsBound(f"test value {t.value} exceeds bound {sys.bound}")
        down = _axis(sys.dimension, t.counter, -t.value)
        up = _axis(sys.dimension, t.counter, t.value)
        if t.op == GE:
            r = names.fresh()
            new_states.append(r)
            new_transitions.append(Unary(t.source, down, r))
            new_transitions.append(Unary(r, up, t.target))
        elif t.op == LE:
            gap = sys.bound - t.value
            r = names.fresh()
            new_states.append(r)
            new_transitions.append(Unary(t.source, _axis(sys.dimension, t.counter, gap), r))
            new_transitions.append(Unary(r, _axis(sys.dimension, t.counter, -gap), t.target))
        else:
            r1 = names.fresh()
            r2 = names.fresh()
            new_states.extend([r1, r2])
            new_transitions.append(Unary(t.source, down, r1))
            new_transitions.append(Unary(r1, _axis(sys.dimension, t.counter, sys.bound), r2))
            new_transitions.append(
                Unary(r2, _axis(sys.dimension, t.counter, -(sys.bound - t.value)), t.target)
            )
    return _finish(
        System(sys.dimension, sys.bound, tuple(new_states), sys.initial_state, tuple(new_transitions))
    )


def raise_bound(sys: System, new_bound: int) -> System:
    """Raise the counter bound without changing reachability at old values.

    Each transition is followed by a chain of fresh states testing every
    counter against the old bound, so values above it remain unusable.
    """
    if sys.bound is None:
        raise GadgetError("raise_bound requires a bounded system")
    if new_bound < sys.bound:
        raise BoundDecrease(f"new bound {new_bound} below current bound {sys.bound}")
    old = sys.bound
    d = sys.dimension
    names = _Names(sys.states, "rb")
    new_states = list(sys.states)
    new_transitions: list[Transition] = []

    def chain_to(target: str) -> str:
        """Fresh entry state whose <=old test chain ends at `target`."""
        chain = [names.fresh() for _ in range(d)]
        new_states.extend(chain)
        for i, s in enumerate(chain):
            nxt = chain[i + 1] if i + 1 < d else target
            new_transitions.append(Test(s, nxt, i + 1, LE, old))
        return chain[0]

    for t in sys.transitions:
        if isinstance(t, Unary):
            new_transitions.append(Unary(t.source, t.delta, chain_to(t.target)))
        elif isinstance(t, Test):
            new_transitions.append(Test(t.source, chain_to(t.target), t.counter, t.op, t.value))
        elif isinstance(t, Double):
            new_transitions.append(Double(t.source, chain_to(t.target)))
        elif isinstance(t, Halve):
            new_transitions.append(Halve(t.source, chain_to(t.target)))
        else:
            new_transitions.append(Branch(t.source, chain_to(t.left), chain_to(t.right)))
    return _finish(
        System(d, new_bound, tuple(new_states), sys.initial_state, tuple(new_transitions))
    )


# ---------------------------------------------------------------------------
# The two-counter copy gadget


def gadget_copy2(M: int) -> GadgetHandle:
    """Two-counter system mapping p(n,m) to exactly q(n,n) on {0..M}^2.

    Drains the second counter, transfers the first into the second at scale
    M+2, then transfers back at scale M+1, leaving one surplus unit per
    original unit; the final c2 <= M test admits only the exact transfer.
    """
    if M < 1:
        raise GadgetError(f"copy gadget needs M >= 1, got {M}")
    bound = M * (M + 2)
    sys = System(
        dimension=2,
        bound=bound,
        states=("p", "r1", "r2", "q"),
        initial_state=None,
        transitions=(
            Unary("p", (0, -1), "p"),
            Test("p", "r1", 2, EQ, 0),
            Unary("r1", (-1, M + 2), "r1"),
            Test("r1", "r2", 1, EQ, 0),
            Unary("r2", (1, -(M + 1)), "r2"),
            Test("r2", "q", 2, LE, M),
        ),
    )
    return GadgetHandle(_finish(sys), "p", ("q",), bound)


# ---------------------------------------------------------------------------
# Doubling/halving elimination


def compile_to_2d(sys: System) -> System:
    """Simulate dimension-1 doubling/halving with a second counter.

    Doubling drains the counter into the fresh one at rate two and drains it
    back; halving mirrors the rates.  All other transitions are lifted with
    a zero second component; original reach answers survive on (value, 0)
    configurations.
    """
    if sys.dimension != 1:
        raise NotDimensionOne(f"compile_to_2d needs dimension 1, got {sys.dimension}")
    names = _Names(sys.states, "2d")
    new_states = list(sys.states)
    new_transitions: list[Transition] = []
    for t in sys.transitions:
        if isinstance(t, Unary):
            new_transitions.append(Unary(t.source, (t.delta[0], 0), t.target))
        elif isinstance(t, Test):
            new_transitions.append(t)
        elif isinstance(t, (Double, Halve)):
            a = names.fresh()
            b = names.fresh()
            new_states.extend([a, b])
            rate = (-1, 2) if isinstance(t, Double) else (-2, 1)
            new_transitions.append(Unary(t.source, (0, 0), a))
            new_transitions.append(Unary(a, rate, a))
            new_transitions.append(Test(a, b, 1, EQ, 0))
            new_transitions.append(Unary(b, (1, -1), b))
            new_transitions.append(Test(b, t.target, 2, EQ, 0))
        else:
            new_transitions.append(t)
    return _finish(
        System(2, sys.bound, tuple(new_states), sys.initial_state, tuple(new_transitions))
    )


def _shift_power(sys: System) -> int:
    if sys.dimension != 1:
        raise NotDimensionOne("cyclic-shift compilation needs dimension 1")
    if sys.bound is None or sys.bound < 1 or (sys.bound + 1) & sys.bound:
        raise BoundNotPowerOfTwoMinusOne(
            f"bound must be of the form 2^n - 1 with n >= 1, got {sys.bound}"
        )
    return (sys.bound + 1).bit_length() - 1


def compile_doubling_only(sys: System) -> System:
    """Replace each halving by n-1 cyclic left shifts of the n-bit counter.

    One shift: below 2^(n-1) just double, otherwise subtract 2^(n-1), double
    and add one.  A final test that the top bit is clear makes the compound
    behave exactly like halving.
    """
    n = _shift_power(sys)
    half = 1 << (n - 1)
    names = _Names(sys.states, "dbl")
    new_states = list(sys.states)
    new_transitions: list[Transition] = []
    for t in sys.transitions:
        if not isinstance(t, Halve):
            new_transitions.append(t)
            continue
        at = t.source
        for _ in range(n - 1):
            q1, q2, r, nxt = (names.fresh() for _ in range(4))
            new_states.extend([q1, q2, r, nxt])
            new_transitions.append(Unary(at, (-half,), q1))
            new_transitions.append(Double(q1, q2))
            new_transitions.append(Unary(q2, (1,), nxt))
            new_transitions.append(Test(at, r, 1, LE, half - 1))
            new_transitions.append(Double(r, nxt))
            at = nxt
        new_transitions.append(Test(at, t.target, 1, LE, half - 1))
    return _finish(
        System(1, sys.bound, tuple(new_states), sys.initial_state, tuple(new_transitions))
    )


def compile_halving_only(sys: System) -> System:
    """Replace each doubling by a top-bit test and n-1 cyclic right shifts.

    One shift guesses the parity: either halve directly, or subtract one,
    halve and add 2^(n-1); the wrong guess blocks on the halving.
    """
    n = _shift_power(sys)
    half = 1 << (n - 1)
    names = _Names(sys.states, "hlv")
    new_states = list(sys.states)
    new_transitions: list[Transition] = []
    for t in sys.transitions:
        if not isinstance(t, Double):
            new_transitions.append(t)
            continue
        at = names.fresh()
        new_states.append(at)
        new_transitions.append(Test(t.source, at, 1, LE, half - 1))
        for j in range(n - 1):
            q1, q2, r = (names.fresh() for _ in range(3))
            new_states.extend([q1, q2, r])
            nxt = t.target if j == n - 2 else names.fresh()
            if j != n - 2:
                new_states.append(nxt)
            new_transitions.append(Unary(at, (-1,), q1))
            new_transitions.append(Halve(q1, q2))
            new_transitions.append(Unary(q2, (half,), nxt))
            new_transitions.append(Unary(at, (0,), r))
            new_transitions.append(Halve(r, nxt))
            at = nxt
        if n == 1:
            # No shifts required: value must be 0 and doubling it is a no-op.
            new_transitions.append(Unary(at, (0,), t.target))
    return _finish(
        System(1, sys.bound, tuple(new_states), sys.initial_state, tuple(new_transitions))
    )


# ---------------------------------------------------------------------------
# The x + Mx gadget and its branching copy variant


def _xmx_bound(M: int) -> int:
    return M + M * (M - 1) + M * M * (M - 1) + M * M * M * (M - 1)


def _power_of_two_exponent(M: int) -> int:
    if M < 2 or M & (M - 1):
        raise NotPowerOfTwo(f"M must be a power of two >= 2, got {M}")
    return M.bit_length() - 1


def _xmx_parts(M: int, chain: list[str]) -> list[Transition]:
    """Transitions of the x+Mx computer over states p, r and halving chain."""
    step = M + M * M + M * M * M
    transitions: list[Transition] = [
        Unary("p", (step,), "p"),
        Unary("p", (0,), "r"),
        Unary("r", (-(1 + M * M * M),), "r"),
        Test("r", chain[0], 1, LE, M * M * M + M * M),
    ]
    for a, b in zip(chain, chain[1:]):
        transitions.append(Halve(a, b))
    return transitions


def gadget_xmx(M: int) -> GadgetHandle:
    """One-counter system with halving computing x + Mx on {0..M-1}.

    Entry loop pumps M+M^2+M^3 per original unit, the drain loop removes
    1+M^3 per unit, the exit test and the divisibility of the halving chain
    force the two loop counts to match the input.
    """
    n = _power_of_two_exponent(M)
    bound = _xmx_bound(M)
    chain = [f"q{i}" for i in range(n + 1)]
    sys = System(
        dimension=1,
        bound=bound,
        states=tuple(["p", "r"] + chain),
        initial_state=None,
        transitions=tuple(_xmx_parts(M, chain)),
    )
    return GadgetHandle(_finish(sys), "p", (chain[-1],), bound)


def gadget_branch_copy(M: int) -> GadgetHandle:
    """Branching gadget: from p(x), x < M, the only frontier over the exit
    states is {q1(x), q2(x)}.

    Computes x+Mx, branches, checks the left part below M and divides the
    right part by M through n halvings; the split is forced to (x, Mx).
    The initial state is a fresh isolated sink, so no leaf ever closes
    inside the gadget.
    """
    n = _power_of_two_exponent(M)
    inner = rename_states(gadget_xmx(M).system, {f"q{i}": f"#x-q{i}" for i in range(n + 1)} | {"r": "#x-r"})
    out = f"#x-q{n}"
    svec = [f"s{i}" for i in range(n)]
    states = list(inner.states) + ["r", "q1"] + svec + ["q2", "#init"]
    transitions = list(inner.transitions)
    transitions.append(Branch(out, "r", svec[0]))
    transitions.append(Test("r", "q1", 1, LE, M - 1))
    chain = svec + ["q2"]
    for a, b in zip(chain, chain[1:]):
        transitions.append(Halve(a, b))
    bound = _xmx_bound(M)
    sys = System(1, bound, tuple(states), "#init", tuple(transitions))
    return GadgetHandle(_finish(sys), "p", ("q1", "q2"), bound)
