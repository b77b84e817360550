"""Core model: vector addition systems with states, optional counter bound,
optional branching, and dimension-1 doubling/halving.

Every type is immutable and every operation is a pure function.  Firing a
branching transition takes an explicit split of the counter vector, so all
nondeterminism lives in the solvers, never in the step semantics.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Optional, Union

GE = ">="
LE = "<="
EQ = "="
TEST_OPS = (GE, LE, EQ)


class VassError(Exception):
    """Base class for errors raised on purpose by this package."""


class FireError(VassError):
    """A single-step semantics error."""


class WrongState(FireError):
    """The configuration is not at the transition's source state."""


class BranchNotUnary(FireError):
    """A branching transition was passed where a unary step was expected."""


class Inapplicable(FireError):
    """The transition does not apply to the configuration."""


class BadSplit(FireError):
    """A branch split does not sum to the parent vector (or leaves bounds)."""


# ---------------------------------------------------------------------------
# Transitions


@dataclass(frozen=True)
class Unary:
    """Add an integer vector to the counters: source --delta--> target."""

    source: str
    delta: tuple[int, ...]
    target: str

    def __post_init__(self):
        object.__setattr__(self, "delta", tuple(int(z) for z in self.delta))


@dataclass(frozen=True)
class Test:
    """Pass through iff counter (1-indexed) compares against value."""

    source: str
    target: str
    counter: int
    op: str
    value: int


@dataclass(frozen=True)
class Double:
    """Multiply the single counter by two (dimension 1 only)."""

    source: str
    target: str


@dataclass(frozen=True)
class Halve:
    """Divide the single counter by two; blocked on odd values."""

    source: str
    target: str


@dataclass(frozen=True)
class Branch:
    """Split the counter vector additively between two child branches."""

    source: str
    left: str
    right: str


Transition = Union[Unary, Test, Double, Halve, Branch]
UNARY_KINDS = (Unary, Test, Double, Halve)


@dataclass(frozen=True)
class Configuration:
    """A state paired with a vector of natural counter values."""

    state: str
    vector: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "vector", tuple(int(v) for v in self.vector))

    def __str__(self):
        return f"{self.state}({','.join(str(v) for v in self.vector)})"


@dataclass(frozen=True)
class System:
    """A d-dimensional system; `bound` is None for the unbounded variants.

    `initial_state` is the state that closed run-tree leaves must carry
    (with the zero vector); it is mandatory as soon as the system has a
    branching transition.
    """

    dimension: int
    bound: Optional[int]
    states: tuple[str, ...]
    initial_state: Optional[str] = None
    transitions: tuple[Transition, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "transitions", tuple(self.transitions))

    @cached_property
    def state_index(self) -> dict[str, int]:
        return {s: i for i, s in enumerate(self.states)}

    @cached_property
    def outgoing(self) -> dict[str, tuple[tuple[int, Transition], ...]]:
        """Transitions grouped by source state, in declaration order."""
        by_src: dict[str, list[tuple[int, Transition]]] = {s: [] for s in self.states}
        for i, t in enumerate(self.transitions):
            if t.source in by_src:
                by_src[t.source].append((i, t))
        return {s: tuple(v) for s, v in by_src.items()}

    @property
    def has_branching(self) -> bool:
        return any(isinstance(t, Branch) for t in self.transitions)

    @property
    def zero_vector(self) -> tuple[int, ...]:
        return (0,) * self.dimension


def with_bound(sys: System, bound: Optional[int]) -> System:
    """Same system under a different (or no) counter bound."""
    return dataclasses.replace(sys, bound=bound)


def rename_states(sys: System, mapping: dict[str, str]) -> System:
    """Rename states; names missing from the mapping are kept as-is."""

    def m(s: str) -> str:
        return mapping.get(s, s)

    new_states = tuple(m(s) for s in sys.states)
    if len(set(new_states)) != len(new_states):
        raise VassError("state renaming is not injective")
    new_transitions = []
    for t in sys.transitions:
        if isinstance(t, Unary):
            new_transitions.append(Unary(m(t.source), t.delta, m(t.target)))
        elif isinstance(t, Test):
            new_transitions.append(Test(m(t.source), m(t.target), t.counter, t.op, t.value))
        elif isinstance(t, Double):
            new_transitions.append(Double(m(t.source), m(t.target)))
        elif isinstance(t, Halve):
            new_transitions.append(Halve(m(t.source), m(t.target)))
        else:
            new_transitions.append(Branch(m(t.source), m(t.left), m(t.right)))
    initial = m(sys.initial_state) if sys.initial_state is not None else None
    return System(sys.dimension, sys.bound, new_states, initial, tuple(new_transitions))


def initial_configuration(sys: System) -> Configuration:
    if sys.initial_state is None:
        raise VassError("system has no initial state")
    return Configuration(sys.initial_state, sys.zero_vector)


# ---------------------------------------------------------------------------
# Validation


@dataclass(frozen=True)
class ValidationReport:
    problems: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.problems


def validate_system(sys: System) -> ValidationReport:
    """Check the structural invariants; violations are report content."""
    problems: list[str] = []
    if sys.dimension < 1:
        problems.append(f"dimension must be positive, got {sys.dimension}")
    if sys.bound is not None and sys.bound < 0:
        problems.append(f"bound must be a natural number, got {sys.bound}")
    if len(set(sys.states)) != len(sys.states):
        problems.append("duplicate state identifiers")
    known = set(sys.states)
    if sys.initial_state is not None and sys.initial_state not in known:
        problems.append(f"initial state {sys.initial_state!r} not declared")

    def check_state(i: int, role: str, s: str):
        if s not in known:
            problems.append(f"transition {i}: {role} state {s!r} not declared")

    saw_branch = False
    for i, t in enumerate(sys.transitions):
        check_state(i, "source", t.source)
        if isinstance(t, Unary):
            check_state(i, "target", t.target)
            if len(t.delta) != sys.dimension:
                problems.append(f"transition {i}: delta arity {len(t.delta)} != dimension {sys.dimension}")
        elif isinstance(t, Test):
            check_state(i, "target", t.target)
            if not 1 <= t.counter <= sys.dimension:
                problems.append(f"transition {i}: counter {t.counter} out of 1..{sys.dimension}")
            if t.op not in TEST_OPS:
                problems.append(f"transition {i}: unknown test operator {t.op!r}")
            if t.value < 0:
                problems.append(f"transition {i}: negative test value {t.value}")
            if t.op in (LE, EQ):
                if sys.bound is None:
                    problems.append(f"transition {i}: {t.op!r} test requires a bounded system")
                elif t.value > sys.bound:
                    problems.append(
                        f"transition {i}: test value {t.value} exceeds bound {sys.bound} (unsatisfiable)"
                    )
        elif isinstance(t, (Double, Halve)):
            check_state(i, "target", t.target)
            if sys.dimension != 1:
                kind = "doubling" if isinstance(t, Double) else "halving"
                problems.append(f"transition {i}: {kind} requires dimension 1")
        elif isinstance(t, Branch):
            saw_branch = True
            check_state(i, "left", t.left)
            check_state(i, "right", t.right)
        else:  # pragma: no cover - exhaustive over the union
            problems.append(f"transition {i}: unknown transition kind {type(t).__name__}")
    if saw_branch and sys.initial_state is None:
        problems.append("branching transitions require an initial state")
    return ValidationReport(tuple(problems))


# ---------------------------------------------------------------------------
# Single-step semantics


def try_fire(sys: System, config: Configuration, t: Transition) -> Optional[Configuration]:
    """Successor of `config` under unary-kind `t`, or None when inapplicable.

    Raises WrongState/BranchNotUnary on caller errors; mere inapplicability
    (negative counter, bound overflow, failed test, odd halving) is None.
    """
    if isinstance(t, Branch):
        raise BranchNotUnary(f"{t} splits the vector; use fire_branch")
    if config.state != t.source:
        raise WrongState(f"configuration at {config.state!r}, transition leaves {t.source!r}")
    bound = sys.bound
    if isinstance(t, Unary):
        if len(t.delta) != len(config.vector):
            raise VassError("delta arity does not match configuration")
        vec = tuple(v + z for v, z in zip(config.vector, t.delta))
        for v in vec:
            if v < 0 or (bound is not None and v > bound):
                return None
        return Configuration(t.target, vec)
    if isinstance(t, Test):
        v = config.vector[t.counter - 1]
        if t.op == GE:
            ok = v >= t.value
        elif t.op == LE:
            ok = v <= t.value
        else:
            ok = v == t.value
        return Configuration(t.target, config.vector) if ok else None
    if isinstance(t, Double):
        v = 2 * config.vector[0]
        if bound is not None and v > bound:
            return None
        return Configuration(t.target, (v,))
    # Halve
    v = config.vector[0]
    if v % 2:
        return None
    return Configuration(t.target, (v // 2,))


def fire(sys: System, config: Configuration, t: Transition) -> Configuration:
    """Like try_fire but raises Inapplicable with a reason instead of None."""
    succ = try_fire(sys, config, t)
    if succ is not None:
        return succ
    if isinstance(t, Unary):
        vec = tuple(v + z for v, z in zip(config.vector, t.delta))
        if any(v < 0 for v in vec):
            raise Inapplicable(f"{config} + {t.delta} leaves the naturals")
        raise Inapplicable(f"{config} + {t.delta} exceeds bound {sys.bound}")
    if isinstance(t, Test):
        raise Inapplicable(f"test c{t.counter} {t.op} {t.value} fails at {config}")
    if isinstance(t, Double):
        raise Inapplicable(f"doubling {config} exceeds bound {sys.bound}")
    raise Inapplicable(f"halving {config} blocked on odd value")


def fire_branch(
    sys: System,
    config: Configuration,
    t: Branch,
    split: tuple[tuple[int, ...], tuple[int, ...]],
) -> tuple[Configuration, Configuration]:
    """Split `config` along branch `t` into (left, right) child configurations."""
    if not isinstance(t, Branch):
        raise VassError(f"fire_branch needs a branching transition, got {t}")
    if config.state != t.source:
        raise WrongState(f"configuration at {config.state!r}, transition leaves {t.source!r}")
    m1, m2 = (tuple(int(v) for v in m) for m in split)
    if len(m1) != len(config.vector) or len(m2) != len(config.vector):
        raise BadSplit("split arity does not match configuration")
    if any(v < 0 for v in m1) or any(v < 0 for v in m2):
        raise BadSplit("split components must be naturals")
    if tuple(a + b for a, b in zip(m1, m2)) != config.vector:
        raise BadSplit(f"split {m1}+{m2} does not sum to {config.vector}")
    if sys.bound is not None:
        if any(v > sys.bound for v in m1) or any(v > sys.bound for v in m2):
            raise BadSplit(f"split component exceeds bound {sys.bound}")
    return Configuration(t.left, m1), Configuration(t.right, m2)


# ---------------------------------------------------------------------------
# Run trees


@dataclass(frozen=True)
class RunNode:
    """Tree node: a configuration plus the transition index fired at it.

    Leaves carry transition None.  One child means a unary-kind step, two
    children a branch split.  Equality is structural; avoid comparing very
    deep trees directly (use the serializer), Python recurses on tuples.
    """

    config: Configuration
    transition: Optional[int]
    children: tuple["RunNode", ...]


@dataclass(frozen=True)
class FullRun:
    """Every leaf must be the initial configuration."""


@dataclass(frozen=True)
class Context:
    """Exactly one leaf carries `target`; all other leaves are initial."""

    target: Configuration


@dataclass(frozen=True)
class Partial:
    """No leaf discipline."""


RunMode = Union[FullRun, Context, Partial]


@dataclass(frozen=True)
class RunTree:
    root: RunNode
    mode: RunMode


def iter_nodes(tree: RunTree) -> Iterator[tuple[RunNode, str]]:
    """Preorder traversal yielding (node, path); iterative, safe on deep chains."""
    stack = [(tree.root, "root")]
    while stack:
        node, path = stack.pop()
        yield node, path
        for i in range(len(node.children) - 1, -1, -1):
            stack.append((node.children[i], f"{path}.{i}"))


def tree_leaves(tree: RunTree) -> list[tuple[RunNode, str]]:
    return [(n, p) for n, p in iter_nodes(tree) if not n.children]


def validate_run_tree(sys: System, tree: RunTree) -> ValidationReport:
    """Replay every edge through the step semantics and check the leaf
    discipline required by the tree's mode tag."""
    problems: list[str] = []
    bound = sys.bound
    n_trans = len(sys.transitions)
    leaves: list[tuple[RunNode, str]] = []

    for node, path in iter_nodes(tree):
        cfg = node.config
        if cfg.state not in sys.state_index:
            problems.append(f"{path}: unknown state {cfg.state!r}")
            continue
        if len(cfg.vector) != sys.dimension:
            problems.append(f"{path}: vector arity {len(cfg.vector)} != dimension {sys.dimension}")
            continue
        if any(v < 0 for v in cfg.vector):
            problems.append(f"{path}: negative counter value in {cfg}")
        if bound is not None and any(v > bound for v in cfg.vector):
            problems.append(f"{path}: counter value exceeds bound {bound} in {cfg}")
        k = len(node.children)
        if k == 0:
            if node.transition is not None:
                problems.append(f"{path}: leaf annotated with transition {node.transition}")
            leaves.append((node, path))
            continue
        if k > 2:
            problems.append(f"{path}: node with {k} children")
            continue
        idx = node.transition
        if idx is None or not 0 <= idx < n_trans:
            problems.append(f"{path}: missing or out-of-range transition index {idx!r}")
            continue
        t = sys.transitions[idx]
        if t.source != cfg.state:
            problems.append(f"{path}: transition {idx} leaves {t.source!r}, node is at {cfg.state!r}")
            continue
        if k == 1:
            if isinstance(t, Branch):
                problems.append(f"{path}: branch transition {idx} with a single child")
                continue
            succ = try_fire(sys, cfg, t)
            child = node.children[0].config
            if succ is None or succ != child:
                problems.append(f"{path}: transition {idx} does not lead from {cfg} to {child}")
        else:
            if not isinstance(t, Branch):
                problems.append(f"{path}: transition {idx} is not branching but node has two children")
                continue
            left, right = node.children[0].config, node.children[1].config
            if left.state != t.left or right.state != t.right:
                problems.append(f"{path}: branch {idx} children states ({left.state},{right.state})"
                                f" != ({t.left},{t.right})")
            elif (len(left.vector) != sys.dimension or len(right.vector) != sys.dimension
                  or tuple(a + b for a, b in zip(left.vector, right.vector)) != cfg.vector):
                problems.append(f"{path}: branch split {left} / {right} does not sum to {cfg}")

    mode = tree.mode
    if isinstance(mode, FullRun):
        if sys.initial_state is None:
            problems.append("full run requires an initial state")
        else:
            want = Configuration(sys.initial_state, sys.zero_vector)
            for node, path in leaves:
                if node.config != want:
                    problems.append(f"{path}: full-run leaf {node.config} != {want}")
    elif isinstance(mode, Context):
        target = mode.target
        others = [(n, p) for n, p in leaves if n.config != target]
        if len(others) == len(leaves):
            problems.append(f"no leaf carries the context target {target}")
        else:
            # One target leaf is distinguished; every remaining leaf (including
            # extra copies of the target label) must be the closed initial one.
            rest = list(others)
            dup_targets = len(leaves) - len(others) - 1
            rest.extend([(n, p) for n, p in leaves if n.config == target][:dup_targets])
            if rest:
                if sys.initial_state is None:
                    problems.append("context with extra leaves requires an initial state")
                else:
                    want = Configuration(sys.initial_state, sys.zero_vector)
                    for node, path in rest:
                        if node.config != want:
                            problems.append(f"{path}: context leaf {node.config} is neither the"
                                            f" target nor {want}")
    return ValidationReport(tuple(problems))
