"""Countdown games and the two reductions built on top of the gadget library.

A countdown game is played on a weighted graph: the owner of the current
node picks an outgoing move whose weight fits into the counter and subtracts
it.  Reaching zero wins for the existential player; being stuck wins for the
universal player.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property
from typing import Optional

from .gadgets import GadgetHandle, _fresh_name, _xmx_bound, gadget_branch_copy
from .model import (
    Branch,
    Configuration,
    Double,
    Halve,
    System,
    Test,
    Transition,
    Unary,
    VassError,
    rename_states,
    validate_system,
)
from .solver import MissingInitialState


class ReductionError(VassError):
    pass


class MoreThanTwoOutgoing(ReductionError):
    pass


class NotNormalized(ReductionError):
    pass


class HasDoubling(ReductionError):
    pass


class TestsNotDesugared(ReductionError):
    pass


class Player(enum.Enum):
    EXISTS = "exists"
    FORALL = "forall"


@dataclass(frozen=True)
class GameMove:
    source: str
    weight: int
    target: str


@dataclass(frozen=True)
class GameConfiguration:
    node: str
    counter: int

    def __str__(self):
        return f"{self.node}({self.counter})"


@dataclass(frozen=True)
class CountdownGame:
    exists_nodes: tuple[str, ...]
    forall_nodes: tuple[str, ...]
    moves: tuple[GameMove, ...]

    def __post_init__(self):
        object.__setattr__(self, "exists_nodes", tuple(self.exists_nodes))
        object.__setattr__(self, "forall_nodes", tuple(self.forall_nodes))
        object.__setattr__(self, "moves", tuple(self.moves))
        overlap = set(self.exists_nodes) & set(self.forall_nodes)
        if overlap:
            raise VassError(f"nodes owned by both players: {sorted(overlap)}")
        known = set(self.nodes)
        for m in self.moves:
            if m.weight < 1:
                raise VassError(f"move weights must be positive, got {m}")
            if m.source not in known or m.target not in known:
                raise VassError(f"move {m} references an undeclared node")

    @property
    def nodes(self) -> tuple[str, ...]:
        return self.exists_nodes + self.forall_nodes

    @cached_property
    def outgoing(self) -> dict[str, tuple[tuple[int, GameMove], ...]]:
        by_node: dict[str, list[tuple[int, GameMove]]] = {n: [] for n in self.nodes}
        for i, m in enumerate(self.moves):
            by_node[m.source].append((i, m))
        return {n: tuple(v) for n, v in by_node.items()}

    def owner(self, node: str) -> Player:
        return Player.EXISTS if node in set(self.exists_nodes) else Player.FORALL


@dataclass(frozen=True)
class GameSolution:
    winner: Player
    strategy: dict[GameConfiguration, GameMove]


def solve_countdown(game: CountdownGame, start: GameConfiguration) -> GameSolution:
    """Backward-induction winner, memoized over (node, counter).

    Counter zero wins for the existential player immediately; otherwise the
    mover needs a move with weight at most the counter, and being stuck
    loses.  The recorded strategy picks the first winning move in move
    order, on every configuration of the winner's nodes reachable while the
    loser plays arbitrarily.
    """
    if start.node not in set(game.nodes):
        raise VassError(f"unknown start node {start.node!r}")
    if start.counter < 0:
        raise VassError("start counter must be a natural number")
    memo: dict[tuple[str, int], bool] = {}
    stack = [(start.node, start.counter)]
    while stack:
        node, counter = stack[-1]
        if (node, counter) in memo:
            stack.pop()
            continue
        if counter == 0:
            memo[(node, counter)] = True
            stack.pop()
            continue
        legal = [(i, m) for i, m in game.outgoing[node] if m.weight <= counter]
        if not legal:
            memo[(node, counter)] = False
            stack.pop()
            continue
        succ = [(m.target, counter - m.weight) for _, m in legal]
        missing = [s for s in succ if s not in memo]
        if missing:
            stack.extend(missing)
            continue
        values = [memo[s] for s in succ]
        exists_wins = any(values) if game.owner(node) is Player.EXISTS else all(values)
        memo[(node, counter)] = exists_wins
        stack.pop()

    winner = Player.EXISTS if memo[(start.node, start.counter)] else Player.FORALL
    goal = winner is Player.EXISTS
    strategy: dict[GameConfiguration, GameMove] = {}
    seen = {(start.node, start.counter)}
    queue = [(start.node, start.counter)]
    while queue:
        node, counter = queue.pop()
        if counter == 0:
            continue
        legal = [(i, m) for i, m in game.outgoing[node] if m.weight <= counter]
        if not legal:
            continue
        if game.owner(node) is winner:
            chosen = next(m for _, m in legal if memo[(m.target, counter - m.weight)] is goal)
            nxt = [(chosen.target, counter - chosen.weight)]
            strategy[GameConfiguration(node, counter)] = chosen
        else:
            nxt = [(m.target, counter - m.weight) for _, m in legal]
        for s in nxt:
            if s not in seen:
                seen.add(s)
                queue.append(s)
    return GameSolution(winner, strategy)


def normalize_game(
    game: CountdownGame, start: GameConfiguration
) -> tuple[CountdownGame, GameConfiguration]:
    """Bring a game into the shape the hardness reduction expects.

    Every node gets exactly two outgoing moves (single moves are duplicated,
    dead ends get two never-legal self-loops) and the start counter is
    padded to 2^n - 1 by a forced opening move from a fresh existential
    node.  The winner is preserved.
    """
    for node in game.nodes:
        if len(game.outgoing[node]) > 2:
            raise MoreThanTwoOutgoing(f"node {node!r} has more than two outgoing moves")
    moves = list(game.moves)
    changed = False
    for node in game.nodes:
        out = game.outgoing[node]
        if len(out) == 1:
            moves.append(out[0][1])
            changed = True
        elif not out:
            blocked = GameMove(node, start.counter + 1, node)
            moves.extend([blocked, blocked])
            changed = True
    exists_nodes = game.exists_nodes
    new_start = start
    c = start.counter
    if c & (c + 1):  # not of the form 2^n - 1
        padded = (1 << c.bit_length()) - 1
        opener = _fresh_name(set(game.nodes), "#start")
        exists_nodes = (opener,) + exists_nodes
        move = GameMove(opener, padded - c, start.node)
        moves.extend([move, move])
        new_start = GameConfiguration(opener, padded)
        changed = True
    if not changed:
        return game, start
    return CountdownGame(exists_nodes, game.forall_nodes, tuple(moves)), new_start


# ---------------------------------------------------------------------------
# Countdown game -> one-counter branching system with doubling/halving


def reduce_countdown(
    game: CountdownGame, start: GameConfiguration
) -> tuple[System, Configuration]:
    """Build a system accepting from the start configuration exactly when
    the existential player wins the normalized game.

    Existential nodes keep their two moves as counter subtractions; each
    universal node is the entry of a private branch-copy gadget whose two
    exits take one move each, so acceptance needs both continuations to
    accept.  Any node may close its leaf once the counter hits zero.
    """
    c = start.counter
    if c & (c + 1):
        raise NotNormalized(f"start counter {c} is not of the form 2^n - 1")
    for node in game.nodes:
        if len(game.outgoing[node]) != 2:
            raise NotNormalized(f"node {node!r} does not have exactly two outgoing moves")
    M = c + 1
    taken = set(game.nodes)
    states: list[str] = list(game.nodes)
    transitions: list[Transition] = []
    bound = _xmx_bound(M) if M >= 2 else 1

    for k, node in enumerate(game.nodes):
        (_, m1), (_, m2) = game.outgoing[node]
        if game.owner(node) is Player.EXISTS:
            transitions.append(Unary(node, (-m1.weight,), m1.target))
            transitions.append(Unary(node, (-m2.weight,), m2.target))
            continue
        if M == 1:
            # Counter values never exceed zero, where a bare branch already
            # copies exactly; the full gadget needs M >= 2.
            q1 = _fresh_name(taken, f"#b{k}-q1")
            taken.add(q1)
            q2 = _fresh_name(taken, f"#b{k}-q2")
            taken.add(q2)
            states.extend([q1, q2])
            transitions.append(Branch(node, q1, q2))
        else:
            handle = gadget_branch_copy(M)
            mapping = {}
            for s in handle.system.states:
                if s == handle.entry:
                    mapping[s] = node
                elif s == "#init":
                    continue  # isolated placeholder, dropped on inlining
                else:
                    name = _fresh_name(taken, f"#b{k}-{s.lstrip('#')}")
                    taken.add(name)
                    mapping[s] = name
            for s in handle.system.states:
                if s != handle.entry and s != "#init":
                    states.append(mapping[s])
            for t in handle.system.transitions:
                transitions.append(_remap(t, mapping))
            q1, q2 = (mapping[e] for e in handle.exits)
        transitions.append(Unary(q1, (-m1.weight,), m1.target))
        transitions.append(Unary(q2, (-m2.weight,), m2.target))

    q0 = _fresh_name(taken, "#q0")
    states.append(q0)
    for node in game.nodes:
        transitions.append(Unary(node, (0,), q0))
    sys = System(1, bound, tuple(states), q0, tuple(transitions))
    report = validate_system(sys)
    assert report.ok, report.problems
    return sys, Configuration(start.node, (c,))


def _remap(t: Transition, mapping: dict[str, str]) -> Transition:
    m = lambda s: mapping.get(s, s)
    if isinstance(t, Unary):
        return Unary(m(t.source), t.delta, m(t.target))
    if isinstance(t, Test):
        return Test(m(t.source), m(t.target), t.counter, t.op, t.value)
    if isinstance(t, Double):
        return Double(m(t.source), m(t.target))
    if isinstance(t, Halve):
        return Halve(m(t.source), m(t.target))
    return Branch(m(t.source), m(t.left), m(t.right))


# ---------------------------------------------------------------------------
# Bounded one-counter branching system -> unbounded two-counter one


@dataclass(frozen=True)
class TwoCounterImage:
    """Result of dropping the bound into a complementary second counter.

    A source configuration p(x) is simulated by p(x, 2B-x); `encode`
    performs that translation.
    """

    system: System
    state_map: dict[str, str]
    source_bound: int

    def encode(self, cfg: Configuration) -> Configuration:
        (x,) = cfg.vector
        if not 0 <= x <= self.source_bound:
            raise VassError(f"{cfg} outside the source bound {self.source_bound}")
        return Configuration(self.state_map[cfg.state], (x, 2 * self.source_bound - x))


def reduce_to_2brvass(sys: System) -> TwoCounterImage:
    """Encode a bounded one-counter branching system into an unbounded
    two-counter one keeping the invariant c1 + c2 = 2B at original states.

    Each addition of k also subtracts B+k from the second counter and a
    follow-up step adds B back, so the step fits exactly when the original
    one does.  Branch children each regain B on their second counter, which
    forces the split of the second counter to complement the first.
    """
    if sys.dimension != 1:
        raise ReductionError(f"reduction needs dimension 1, got {sys.dimension}")
    if sys.bound is None:
        raise ReductionError("reduction needs a bounded system")
    if sys.initial_state is None:
        raise MissingInitialState("reduction needs an initial state")
    if any(isinstance(t, (Double, Halve)) for t in sys.transitions):
        raise HasDoubling("doubling/halving must be compiled away first")
    if any(isinstance(t, Test) for t in sys.transitions):
        raise TestsNotDesugared("tests must be desugared first")
    B = sys.bound
    taken = set(sys.states)
    states = list(sys.states)
    transitions: list[Transition] = []
    for k, t in enumerate(sys.transitions):
        if isinstance(t, Unary):
            r = _fresh_name(taken, f"#u{k}")
            taken.add(r)
            states.append(r)
            delta = t.delta[0]
            transitions.append(Unary(t.source, (delta, -B - delta), r))
            transitions.append(Unary(r, (0, B), t.target))
        else:
            s1 = _fresh_name(taken, f"#l{k}")
            taken.add(s1)
            s2 = _fresh_name(taken, f"#r{k}")
            taken.add(s2)
            states.extend([s1, s2])
            transitions.append(Branch(t.source, s1, s2))
            transitions.append(Unary(s1, (0, B), t.left))
            transitions.append(Unary(s2, (0, B), t.right))
    q0p = _fresh_name(taken, "#q0'")
    states.append(q0p)
    transitions.append(Unary(sys.initial_state, (0, -2 * B), q0p))
    image = System(2, None, tuple(states), q0p, tuple(transitions))
    report = validate_system(image)
    assert report.ok, report.problems
    return TwoCounterImage(image, {s: s for s in sys.states}, B)
