"""Exhaustive decision procedures over bounded systems.

Two families live here.  The witnessed procedures (reach_linear,
reach_context, derivable, leaf_frontiers) explore configurations explicitly,
keep one parent pointer per discovery, and can reconstruct a run tree for
every positive answer.  The bulk helpers (reach_set, context_set,
check_computes) answer whole-table questions through the bit-parallel
closure engine; property tests pin both routes to each other.

Determinism: searches proceed in rounds; within a round candidates are
generated in transition-list order, left branch child before right, splits
in ascending order of the left component.  The first derivation of a
configuration wins, so witnesses are minimal in round count.
"""

from __future__ import annotations

import os
from bisect import insort
from collections import deque
from dataclasses import dataclass
from itertools import product
from typing import Iterable, Iterator, Optional

from ._lattice import VectorLattice
from .model import (
    Branch,
    Configuration,
    Context,
    Double,
    FullRun,
    Halve,
    Partial,
    RunNode,
    RunTree,
    System,
    Test,
    Transition,
    Unary,
    VassError,
    try_fire,
)

CONFIG_LIMIT_ENV = "VASSKIT_CONFIG_LIMIT"


class HasBranching(VassError):
    """Linear reachability does not apply to branching systems."""


class OutOfBounds(VassError):
    """A query configuration leaves the system's counter range."""


class MissingInitialState(VassError):
    """Derivability needs the initial state."""


class UnboundedSystem(VassError):
    """The exhaustive solvers require a counter bound."""


class SearchLimitExceeded(VassError):
    """The explicit search outgrew the configured configuration limit."""


@dataclass(frozen=True)
class ReachAnswer:
    reachable: bool
    witness: Optional[RunTree]


# ---------------------------------------------------------------------------
# Shared plumbing


def _search_limit() -> Optional[int]:
    raw = os.environ.get(CONFIG_LIMIT_ENV)
    return int(raw) if raw else None


def _require_bounded(sys: System) -> int:
    if sys.bound is None:
        raise UnboundedSystem("operation requires a bounded system")
    return sys.bound


def _check_config(sys: System, cfg: Configuration) -> None:
    if cfg.state not in sys.state_index:
        raise OutOfBounds(f"unknown state {cfg.state!r}")
    if len(cfg.vector) != sys.dimension:
        raise OutOfBounds(f"{cfg} has arity {len(cfg.vector)}, dimension is {sys.dimension}")
    if any(v < 0 for v in cfg.vector):
        raise OutOfBounds(f"{cfg} has a negative counter")
    if sys.bound is not None and any(v > sys.bound for v in cfg.vector):
        raise OutOfBounds(f"{cfg} exceeds bound {sys.bound}")


def _splits(vector: tuple[int, ...]) -> Iterator[tuple[tuple[int, ...], tuple[int, ...]]]:
    """All (left, right) splits of a vector, ascending in the left part."""
    for left in product(*(range(v + 1) for v in vector)):
        yield left, tuple(v - l for v, l in zip(vector, left))


def _preimages(sys: System, t, cfg: Configuration) -> Iterator[Configuration]:
    """Configurations c with try_fire(sys, c, t) == cfg (at most one)."""
    bound = sys.bound
    if isinstance(t, Unary):
        vec = tuple(v - z for v, z in zip(cfg.vector, t.delta))
        if all(v >= 0 for v in vec) and (bound is None or all(v <= bound for v in vec)):
            yield Configuration(t.source, vec)
    elif isinstance(t, Test):
        v = cfg.vector[t.counter - 1]
        ok = v >= t.value if t.op == ">=" else v <= t.value if t.op == "<=" else v == t.value
        if ok:
            yield Configuration(t.source, cfg.vector)
    elif isinstance(t, Double):
        v = cfg.vector[0]
        if v % 2 == 0:
            yield Configuration(t.source, (v // 2,))
    elif isinstance(t, Halve):
        v = 2 * cfg.vector[0]
        if bound is None or v <= bound:
            yield Configuration(t.source, (v,))


class _Incoming:
    """Transition indexes used by the backward fixpoints."""

    def __init__(self, sys: System):
        self.unary_into: dict[str, list[tuple[int, Transition]]] = {s: [] for s in sys.states}
        self.branch_by_left: dict[str, list[tuple[int, Branch]]] = {s: [] for s in sys.states}
        self.branch_by_right: dict[str, list[tuple[int, Branch]]] = {s: [] for s in sys.states}
        for i, t in enumerate(sys.transitions):
            if isinstance(t, Branch):
                self.branch_by_left[t.left].append((i, t))
                self.branch_by_right[t.right].append((i, t))
            else:
                self.unary_into[t.target].append((i, t))


# ---------------------------------------------------------------------------
# Linear reachability (no branching)


def reach_linear(sys: System, src: Configuration, dst: Configuration) -> ReachAnswer:
    """Breadth-first search over the configuration graph.

    The witness is the lexicographically least among the shortest runs,
    comparing transition indexes position by position.
    """
    _require_bounded(sys)
    if sys.has_branching:
        raise HasBranching("reach_linear does not apply to branching systems")
    _check_config(sys, src)
    _check_config(sys, dst)
    if src == dst:
        return ReachAnswer(True, RunTree(RunNode(dst, None, ()), Context(dst)))
    limit = _search_limit()
    parents: dict[Configuration, Optional[tuple[int, Configuration]]] = {src: None}
    queue = deque([src])
    while queue:
        cfg = queue.popleft()
        for idx, t in sys.outgoing[cfg.state]:
            succ = try_fire(sys, cfg, t)
            if succ is None or succ in parents:
                continue
            parents[succ] = (idx, cfg)
            if succ == dst:
                return ReachAnswer(True, _chain_witness(parents, src, dst))
            queue.append(succ)
        if limit is not None and len(parents) > limit:
            raise SearchLimitExceeded(f"more than {limit} configurations explored")
    return ReachAnswer(False, None)


def _chain_witness(parents, src: Configuration, dst: Configuration) -> RunTree:
    steps: list[tuple[Configuration, int]] = []
    cfg = dst
    while cfg != src:
        idx, prev = parents[cfg]
        steps.append((prev, idx))
        cfg = prev
    node = RunNode(dst, None, ())
    for cfg, idx in steps:
        node = RunNode(cfg, idx, (node,))
    return RunTree(node, Context(dst))


# ---------------------------------------------------------------------------
# Derivability (full runs below a configuration)


class _PartnerSets:
    """Per-state vector sets with sorted iteration, for branch combination."""

    def __init__(self):
        self._by_state: dict[str, list[tuple[int, ...]]] = {}

    def add(self, cfg: Configuration) -> None:
        insort(self._by_state.setdefault(cfg.state, []), cfg.vector)

    def vectors(self, state: str) -> list[tuple[int, ...]]:
        return self._by_state.get(state, [])


def _derive(sys: System, stop_at: Optional[Configuration] = None) -> dict[Configuration, tuple]:
    """Backward fixpoint from the initial configuration.

    Derivation entries: ("axiom",), ("unary", idx, successor) or
    ("branch", idx, left_config, right_config); each references
    configurations committed strictly earlier, so witness extraction
    cannot cycle.
    """
    bound = _require_bounded(sys)
    if sys.initial_state is None:
        raise MissingInitialState("derivability requires an initial state")
    limit = _search_limit()
    inc = _Incoming(sys)
    partners = _PartnerSets()
    axiom = Configuration(sys.initial_state, sys.zero_vector)
    derivations: dict[Configuration, tuple] = {axiom: ("axiom",)}
    partners.add(axiom)
    new = [axiom]
    if stop_at is not None and axiom == stop_at:
        return derivations

    def admit(cand: Configuration, derivation: tuple, fresh: list) -> bool:
        if cand in derivations:
            return False
        derivations[cand] = derivation
        fresh.append(cand)
        return stop_at is not None and cand == stop_at

    while new:
        fresh: list[Configuration] = []
        for cfg in new:
            for idx, t in inc.unary_into[cfg.state]:
                for pre in _preimages(sys, t, cfg):
                    if admit(pre, ("unary", idx, cfg), fresh):
                        return derivations
            for idx, t in inc.branch_by_left[cfg.state]:
                for m2 in partners.vectors(t.right):
                    total = tuple(a + b for a, b in zip(cfg.vector, m2))
                    if any(v > bound for v in total):
                        continue
                    parent = Configuration(t.source, total)
                    if admit(parent, ("branch", idx, cfg, Configuration(t.right, m2)), fresh):
                        return derivations
            for idx, t in inc.branch_by_right[cfg.state]:
                for m1 in partners.vectors(t.left):
                    total = tuple(a + b for a, b in zip(m1, cfg.vector))
                    if any(v > bound for v in total):
                        continue
                    parent = Configuration(t.source, total)
                    if admit(parent, ("branch", idx, Configuration(t.left, m1), cfg), fresh):
                        return derivations
        if limit is not None and len(derivations) > limit:
            raise SearchLimitExceeded(f"more than {limit} configurations derived")
        for cfg in fresh:
            partners.add(cfg)
        new = fresh
    return derivations


def _build_full_run(derivations: dict[Configuration, tuple], cfg: Configuration) -> RunNode:
    """Iterative bottom-up construction of the full-run witness below cfg."""
    built: dict[Configuration, RunNode] = {}
    stack = [cfg]
    while stack:
        c = stack[-1]
        if c in built:
            stack.pop()
            continue
        der = derivations[c]
        if der[0] == "axiom":
            built[c] = RunNode(c, None, ())
            stack.pop()
            continue
        if der[0] == "unary":
            deps = (der[2],)
        else:
            deps = (der[2], der[3])
        missing = [d for d in deps if d not in built]
        if missing:
            stack.extend(missing)
            continue
        built[c] = RunNode(c, der[1], tuple(built[d] for d in deps))
        stack.pop()
    return built[cfg]


class DerivedSet:
    """The set of configurations admitting a full run, with witnesses."""

    def __init__(self, sys: System, derivations: dict[Configuration, tuple]):
        self._sys = sys
        self._derivations = derivations

    def __contains__(self, cfg: Configuration) -> bool:
        return cfg in self._derivations

    def __iter__(self) -> Iterator[Configuration]:
        return iter(self._derivations)

    def __len__(self) -> int:
        return len(self._derivations)

    @property
    def configurations(self) -> frozenset[Configuration]:
        return frozenset(self._derivations)

    def witness(self, cfg: Configuration) -> RunTree:
        if cfg not in self._derivations:
            raise VassError(f"{cfg} is not derivable")
        return RunTree(_build_full_run(self._derivations, cfg), FullRun())


def derivable(sys: System) -> DerivedSet:
    """Least fixpoint of backward closure from the initial configuration."""
    return DerivedSet(sys, _derive(sys))


def accepts(sys: System, root: Configuration) -> bool:
    """Is there a run tree below `root` closing every leaf?"""
    _check_config(sys, root)
    return root in _derive(sys, stop_at=root)


# ---------------------------------------------------------------------------
# Context reachability


def reach_context(sys: System, src: Configuration, dst: Configuration) -> ReachAnswer:
    """Does a partial run lead from src to one open dst leaf, all other
    leaves closed?  Backward fixpoint from dst; branch combination consults
    the derivable set for the side that must close."""
    bound = _require_bounded(sys)
    _check_config(sys, src)
    _check_config(sys, dst)
    deriv = _derive(sys) if sys.has_branching else {}
    partner = _PartnerSets()
    for cfg in deriv:
        partner.add(cfg)
    limit = _search_limit()
    inc = _Incoming(sys)
    table: dict[Configuration, tuple] = {dst: ("target",)}
    if src == dst:
        return ReachAnswer(True, _context_witness(sys, table, deriv, src, dst))
    new = [dst]
    found = False
    while new and not found:
        fresh: list[Configuration] = []

        def admit(cand: Configuration, derivation: tuple) -> bool:
            if cand in table:
                return False
            table[cand] = derivation
            fresh.append(cand)
            return cand == src

        for cfg in new:
            for idx, t in inc.unary_into[cfg.state]:
                for pre in _preimages(sys, t, cfg):
                    if admit(pre, ("unary", idx, cfg)):
                        found = True
                        break
                if found:
                    break
            if found:
                break
            for idx, t in inc.branch_by_left[cfg.state]:
                for m2 in partner.vectors(t.right):
                    total = tuple(a + b for a, b in zip(cfg.vector, m2))
                    if any(v > bound for v in total):
                        continue
                    if admit(Configuration(t.source, total),
                             ("branch", idx, "left", cfg, Configuration(t.right, m2))):
                        found = True
                        break
                if found:
                    break
            if found:
                break
            for idx, t in inc.branch_by_right[cfg.state]:
                for m1 in partner.vectors(t.left):
                    total = tuple(a + b for a, b in zip(m1, cfg.vector))
                    if any(v > bound for v in total):
                        continue
                    if admit(Configuration(t.source, total),
                             ("branch", idx, "right", cfg, Configuration(t.left, m1))):
                        found = True
                        break
                if found:
                    break
            if found:
                break
        if limit is not None and len(table) > limit:
            raise SearchLimitExceeded(f"more than {limit} configurations explored")
        new = fresh
    if src not in table:
        return ReachAnswer(False, None)
    return ReachAnswer(True, _context_witness(sys, table, deriv, src, dst))


def _context_witness(sys, table, derivations, src, dst) -> RunTree:
    spine: list[tuple[Configuration, tuple]] = []
    cfg = src
    while True:
        der = table[cfg]
        spine.append((cfg, der))
        if der[0] == "target":
            break
        cfg = der[3] if der[0] == "branch" else der[2]
    node = RunNode(dst, None, ())
    for cfg, der in reversed(spine[:-1]):
        if der[0] == "unary":
            node = RunNode(cfg, der[1], (node,))
        else:
            closed = _build_full_run(derivations, der[4])
            children = (node, closed) if der[2] == "left" else (closed, node)
            node = RunNode(cfg, der[1], children)
    return RunTree(node, Context(dst))


# ---------------------------------------------------------------------------
# Open-leaf frontiers of partial runs


def _canon_frontier(configs: Iterable[Configuration]) -> tuple[Configuration, ...]:
    return tuple(sorted(configs, key=lambda c: (c.state, c.vector)))


class FrontierSet:
    """Reachable open-leaf multisets (stored as sorted tuples) from a root."""

    def __init__(self, sys, root, frontiers, parents):
        self._sys = sys
        self.root = root
        self.frontiers: frozenset[tuple[Configuration, ...]] = frozenset(frontiers)
        self._parents = parents

    def __contains__(self, frontier) -> bool:
        return _canon_frontier(frontier) in self.frontiers

    def __iter__(self):
        return iter(self.frontiers)

    def __len__(self) -> int:
        return len(self.frontiers)

    def witness(self, frontier) -> RunTree:
        """A partial run whose open leaves form exactly `frontier`."""
        key = _canon_frontier(frontier)
        if key not in self._parents:
            raise VassError(f"frontier {key} was not reached")
        actions = []
        cur = key
        while self._parents[cur] is not None:
            prev, action = self._parents[cur]
            actions.append(action)
            cur = prev
        actions.reverse()
        return _replay_frontier(self._sys, self.root, actions)


class _Builder:
    __slots__ = ("config", "transition", "children")

    def __init__(self, config):
        self.config = config
        self.transition = None
        self.children = []


def _replay_frontier(sys: System, root: Configuration, actions) -> RunTree:
    root_b = _Builder(root)
    open_leaves = [root_b]
    for action in actions:
        open_leaves.sort(key=lambda b: (b.config.state, b.config.vector))
        kind, pos = action[0], action[1]
        node = open_leaves[pos]
        if kind == "close":
            del open_leaves[pos]
            continue
        idx = action[2]
        t = sys.transitions[idx]
        node.transition = idx
        if kind == "unary":
            succ = try_fire(sys, node.config, t)
            child = _Builder(succ)
            node.children = [child]
            open_leaves[pos] = child
        else:
            m1 = action[3]
            m2 = tuple(v - a for v, a in zip(node.config.vector, m1))
            left = _Builder(Configuration(t.left, m1))
            right = _Builder(Configuration(t.right, m2))
            node.children = [left, right]
            open_leaves[pos : pos + 1] = [left, right]
    return RunTree(_freeze(root_b), Partial())


def _freeze(builder: _Builder) -> RunNode:
    done: dict[int, RunNode] = {}
    stack = [builder]
    while stack:
        b = stack[-1]
        missing = [c for c in b.children if id(c) not in done]
        if missing:
            stack.extend(missing)
            continue
        done[id(b)] = RunNode(b.config, b.transition, tuple(done[id(c)] for c in b.children))
        stack.pop()
    return done[id(builder)]


def leaf_frontiers(
    sys: System,
    root: Configuration,
    width_cap: int,
    state_filter: Optional[Iterable[str]] = None,
) -> FrontierSet:
    """Saturate the open-leaf frontier rewriting relation from {root}.

    A member configuration may take any unary-kind step, split along any
    branch transition, or be removed when it equals the initial
    configuration.  Frontiers wider than `width_cap` are pruned.  The result
    keeps the frontiers whose states all lie in `state_filter` (all of them
    when no filter is given).
    """
    bound = _require_bounded(sys)
    if width_cap < 1:
        raise VassError("width_cap must be at least 1")
    _check_config(sys, root)
    limit = _search_limit()
    closing = (
        Configuration(sys.initial_state, sys.zero_vector)
        if sys.initial_state is not None
        else None
    )
    start = _canon_frontier([root])
    parents: dict[tuple[Configuration, ...], Optional[tuple]] = {start: None}
    new = [start]
    while new:
        fresh = []

        def admit(frontier, prev, action):
            if frontier in parents:
                return
            parents[frontier] = (prev, action)
            fresh.append(frontier)

        for frontier in new:
            for i, cfg in enumerate(frontier):
                if i > 0 and frontier[i - 1] == cfg:
                    continue  # identical member: same expansions
                rest = frontier[:i] + frontier[i + 1 :]
                if closing is not None and cfg == closing:
                    admit(rest, frontier, ("close", i))
                for idx, t in sys.outgoing[cfg.state]:
                    if isinstance(t, Branch):
                        if len(rest) + 2 > width_cap:
                            continue
                        for m1, m2 in _splits(cfg.vector):
                            child_pair = (Configuration(t.left, m1), Configuration(t.right, m2))
                            admit(_canon_frontier(rest + child_pair), frontier,
                                  ("branch", i, idx, m1))
                    else:
                        succ = try_fire(sys, cfg, t)
                        if succ is not None:
                            admit(_canon_frontier(rest + (succ,)), frontier, ("unary", i, idx))
        if limit is not None and len(parents) > limit:
            raise SearchLimitExceeded(f"more than {limit} frontiers explored")
        new = fresh
    if state_filter is None:
        kept = set(parents)
    else:
        allowed = set(state_filter)
        kept = {f for f in parents if all(c.state in allowed for c in f)}
    return FrontierSet(sys, root, kept, parents)


# ---------------------------------------------------------------------------
# Bulk closures through the lattice engine


def _apply_forward(lat: VectorLattice, t, mask: int) -> int:
    if isinstance(t, Unary):
        return lat.shift(mask, t.delta)
    if isinstance(t, Test):
        return mask & lat.region(t.counter, t.op, t.value)
    if isinstance(t, Double):
        return lat.doubled(mask)
    return lat.halved(mask)


def _apply_backward(lat: VectorLattice, t, mask: int) -> int:
    if isinstance(t, Unary):
        return lat.shift(mask, tuple(-z for z in t.delta))
    if isinstance(t, Test):
        return mask & lat.region(t.counter, t.op, t.value)
    if isinstance(t, Double):
        return lat.halved(mask)
    return lat.doubled(mask)


def _saturate(sys: System, seed: dict[str, int], gains) -> dict[str, int]:
    """Generic round-based closure: `gains(new)` yields (state, mask) pairs."""
    cur = {s: 0 for s in sys.states}
    pending = seed
    while True:
        new = {}
        for s, m in pending.items():
            add = m & ~cur[s]
            if add:
                new[s] = add
                cur[s] |= add
        if not new:
            return cur
        pending = {}
        for state, mask in gains(new):
            if mask:
                pending[state] = pending.get(state, 0) | mask


def _masks_forward(sys: System, lat: VectorLattice, src: Configuration) -> dict[str, int]:
    def gains(new):
        for t in sys.transitions:
            m = new.get(t.source, 0)
            if m:
                yield t.target, _apply_forward(lat, t, m)

    return _saturate(sys, {src.state: lat.single(src.vector)}, gains)


def _masks_derivable(sys: System, lat: VectorLattice) -> dict[str, int]:
    if sys.initial_state is None:
        raise MissingInitialState("derivability requires an initial state")
    full: dict[str, int] = {s: 0 for s in sys.states}

    def gains(new):
        for s, m in new.items():
            full[s] |= m
        for t in sys.transitions:
            if isinstance(t, Branch):
                gl = new.get(t.left, 0)
                gr = new.get(t.right, 0)
                if gl:
                    yield t.source, lat.sums(gl, full[t.right])
                if gr:
                    yield t.source, lat.sums(full[t.left], gr)
            else:
                m = new.get(t.target, 0)
                if m:
                    yield t.source, _apply_backward(lat, t, m)

    return _saturate(sys, {sys.initial_state: lat.single(sys.zero_vector)}, gains)


def _masks_context(
    sys: System, lat: VectorLattice, src: Configuration, deriv: Optional[dict[str, int]]
) -> dict[str, int]:
    def gains(new):
        for t in sys.transitions:
            if isinstance(t, Branch):
                m = new.get(t.source, 0)
                if m and deriv is not None:
                    yield t.left, lat.diffs(m, deriv[t.right])
                    yield t.right, lat.diffs(m, deriv[t.left])
            else:
                m = new.get(t.source, 0)
                if m:
                    yield t.target, _apply_forward(lat, t, m)

    return _saturate(sys, {src.state: lat.single(src.vector)}, gains)


def _materialize(
    sys: System, masks: dict[str, int], lat: VectorLattice, restrict_states
) -> frozenset[Configuration]:
    states = sys.states if restrict_states is None else [s for s in sys.states if s in set(restrict_states)]
    out = []
    for s in states:
        for vec in lat.members(masks.get(s, 0)):
            out.append(Configuration(s, vec))
    return frozenset(out)


def reach_set(
    sys: System, src: Configuration, restrict_states: Optional[Iterable[str]] = None
) -> frozenset[Configuration]:
    """All configurations reachable from src by unary-kind steps."""
    bound = _require_bounded(sys)
    if sys.has_branching:
        raise HasBranching("reach_set does not apply to branching systems")
    _check_config(sys, src)
    lat = VectorLattice(sys.dimension, bound)
    return _materialize(sys, _masks_forward(sys, lat, src), lat, restrict_states)


def context_set(
    sys: System, src: Configuration, restrict_states: Optional[Iterable[str]] = None
) -> frozenset[Configuration]:
    """All configurations ctx-reachable from src (open-leaf successors)."""
    bound = _require_bounded(sys)
    _check_config(sys, src)
    lat = VectorLattice(sys.dimension, bound)
    deriv = _masks_derivable(sys, lat) if sys.has_branching else None
    return _materialize(sys, _masks_context(sys, lat, src, deriv), lat, restrict_states)


# ---------------------------------------------------------------------------
# Function-computation checking


@dataclass(frozen=True)
class ComputesFailure:
    argument: tuple[int, ...]
    expected: tuple[int, ...]
    reachable: frozenset[tuple[int, ...]]

    def __str__(self):
        got = sorted(self.reachable)
        return (f"f{self.argument} should reach exactly {self.expected}, "
                f"system reaches {got}")


@dataclass(frozen=True)
class ComputesReport:
    ok: bool
    failure: Optional[ComputesFailure]
    points_checked: int


def check_computes(
    sys: System,
    entry: str,
    exit_state: str,
    table: dict[tuple[int, ...], tuple[int, ...]],
    domain_max: int,
) -> ComputesReport:
    """Does the system map entry(n) to exactly {exit(f(n))} for every n in
    {0..domain_max}^d?  Scans all reachable outputs per domain point and
    reports the first mismatch in ascending argument order."""
    bound = _require_bounded(sys)
    for s in (entry, exit_state):
        if s not in sys.state_index:
            raise OutOfBounds(f"unknown state {s!r}")
    if domain_max > bound:
        raise OutOfBounds(f"domain maximum {domain_max} exceeds bound {bound}")
    domain = list(product(range(domain_max + 1), repeat=sys.dimension))
    missing = [n for n in domain if tuple(n) not in table]
    if missing:
        raise VassError(f"function table is missing {missing[0]} (and possibly more)")
    lat = VectorLattice(sys.dimension, bound)
    branching = sys.has_branching
    deriv = _masks_derivable(sys, lat) if branching else None
    checked = 0
    for n in domain:
        src = Configuration(entry, n)
        if branching:
            masks = _masks_context(sys, lat, src, deriv)
        else:
            masks = _masks_forward(sys, lat, src)
        got = frozenset(lat.members(masks.get(exit_state, 0)))
        want = tuple(int(v) for v in table[tuple(n)])
        checked += 1
        if got != {want}:
            return ComputesReport(False, ComputesFailure(tuple(n), want, got), checked)
    return ComputesReport(True, None, checked)
