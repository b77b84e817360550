"""JSON document formats for systems, games, witnesses and configurations.

Serialization is canonical: fixed key order, states in declaration order,
two-space indentation, trailing newline.  parse(serialize(x)) returns x and
serialize(parse(text)) canonicalizes text, byte for byte.

Witness documents store the tree as a flat node array with child indexes in
preorder; run trees are routinely tens of thousands of steps deep, which
physically nested JSON cannot survive (both the writer and the reader
recurse).
"""

from __future__ import annotations

import json
import re
from typing import Any, Optional

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
    TEST_OPS,
    Transition,
    Unary,
    VassError,
    validate_system,
)
from .reductions import CountdownGame, GameConfiguration, GameMove


class ParseError(VassError):
    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        if line is not None:
            message = f"line {line}, column {column}: {message}"
        super().__init__(message)
        self.line = line
        self.column = column


class ValidationError(VassError):
    def __init__(self, problems):
        super().__init__("; ".join(problems))
        self.problems = tuple(problems)


def _loads(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(e.msg, e.lineno, e.colno) from None


def _dumps(doc: Any) -> str:
    return json.dumps(doc, indent=2) + "\n"


def _need(doc: dict, key: str, where: str) -> Any:
    if not isinstance(doc, dict):
        raise ParseError(f"{where}: expected an object")
    if key not in doc:
        raise ParseError(f"{where}: missing key {key!r}")
    return doc[key]


def _int(value: Any, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ParseError(f"{where}: expected an integer, got {value!r}")
    return value


def _str(value: Any, where: str) -> str:
    if not isinstance(value, str):
        raise ParseError(f"{where}: expected a string, got {value!r}")
    return value


def _reject_extra(doc: dict, allowed: set[str], where: str) -> None:
    extra = set(doc) - allowed
    if extra:
        raise ParseError(f"{where}: unknown keys {sorted(extra)}")


# ---------------------------------------------------------------------------
# Systems


def parse_system(text: str) -> System:
    doc = _loads(text)
    _reject_extra(doc if isinstance(doc, dict) else {},
                  {"dimension", "bound", "states", "initial", "transitions"}, "system")
    dimension = _int(_need(doc, "dimension", "system"), "dimension")
    bound = _need(doc, "bound", "system")
    if bound is not None:
        bound = _int(bound, "bound")
    states_doc = _need(doc, "states", "system")
    if not isinstance(states_doc, list):
        raise ParseError("states: expected a list")
    states = tuple(_str(s, "states") for s in states_doc)
    initial = _need(doc, "initial", "system")
    if initial is not None:
        initial = _str(initial, "initial")
    transitions_doc = _need(doc, "transitions", "system")
    if not isinstance(transitions_doc, list):
        raise ParseError("transitions: expected a list")
    transitions = tuple(
        _parse_transition(t, f"transitions[{i}]") for i, t in enumerate(transitions_doc)
    )
    sys = System(dimension, bound, states, initial, transitions)
    report = validate_system(sys)
    if not report.ok:
        raise ValidationError(report.problems)
    return sys


def _parse_transition(doc: Any, where: str) -> Transition:
    kind = _str(_need(doc, "kind", where), where)
    if kind == "unary":
        _reject_extra(doc, {"kind", "from", "to", "delta"}, where)
        delta_doc = _need(doc, "delta", where)
        if not isinstance(delta_doc, list):
            raise ParseError(f"{where}: delta must be a list")
        delta = tuple(_int(z, f"{where}.delta") for z in delta_doc)
        return Unary(_str(_need(doc, "from", where), where), delta,
                     _str(_need(doc, "to", where), where))
    if kind == "test":
        _reject_extra(doc, {"kind", "from", "to", "counter", "op", "value"}, where)
        op = _str(_need(doc, "op", where), where)
        if op not in TEST_OPS:
            raise ParseError(f"{where}: unknown test op {op!r}")
        return Test(
            _str(_need(doc, "from", where), where),
            _str(_need(doc, "to", where), where),
            _int(_need(doc, "counter", where), where),
            op,
            _int(_need(doc, "value", where), where),
        )
    if kind in ("double", "halve"):
        _reject_extra(doc, {"kind", "from", "to"}, where)
        cls = Double if kind == "double" else Halve
        return cls(_str(_need(doc, "from", where), where),
                   _str(_need(doc, "to", where), where))
    if kind == "branch":
        _reject_extra(doc, {"kind", "from", "left", "right"}, where)
        return Branch(
            _str(_need(doc, "from", where), where),
            _str(_need(doc, "left", where), where),
            _str(_need(doc, "right", where), where),
        )
    raise ParseError(f"{where}: unknown transition kind {kind!r}")


def serialize_system(sys: System) -> str:
    transitions = []
    for t in sys.transitions:
        if isinstance(t, Unary):
            transitions.append({"kind": "unary", "from": t.source, "to": t.target,
                                "delta": list(t.delta)})
        elif isinstance(t, Test):
            transitions.append({"kind": "test", "from": t.source, "to": t.target,
                                "counter": t.counter, "op": t.op, "value": t.value})
        elif isinstance(t, Double):
            transitions.append({"kind": "double", "from": t.source, "to": t.target})
        elif isinstance(t, Halve):
            transitions.append({"kind": "halve", "from": t.source, "to": t.target})
        else:
            transitions.append({"kind": "branch", "from": t.source,
                                "left": t.left, "right": t.right})
    doc = {
        "dimension": sys.dimension,
        "bound": sys.bound,
        "states": list(sys.states),
        "initial": sys.initial_state,
        "transitions": transitions,
    }
    return _dumps(doc)


# ---------------------------------------------------------------------------
# Games


def parse_game(text: str) -> tuple[CountdownGame, GameConfiguration]:
    doc = _loads(text)
    _reject_extra(doc if isinstance(doc, dict) else {},
                  {"exists_nodes", "forall_nodes", "transitions", "start"}, "game")
    exists_doc = _need(doc, "exists_nodes", "game")
    forall_doc = _need(doc, "forall_nodes", "game")
    if not isinstance(exists_doc, list) or not isinstance(forall_doc, list):
        raise ParseError("exists_nodes/forall_nodes must be lists")
    moves_doc = _need(doc, "transitions", "game")
    if not isinstance(moves_doc, list):
        raise ParseError("transitions: expected a list")
    moves = []
    for i, m in enumerate(moves_doc):
        where = f"transitions[{i}]"
        _reject_extra(m if isinstance(m, dict) else {}, {"from", "weight", "to"}, where)
        moves.append(GameMove(
            _str(_need(m, "from", where), where),
            _int(_need(m, "weight", where), where),
            _str(_need(m, "to", where), where),
        ))
    start_doc = _need(doc, "start", "game")
    _reject_extra(start_doc if isinstance(start_doc, dict) else {}, {"node", "counter"}, "start")
    start = GameConfiguration(
        _str(_need(start_doc, "node", "start"), "start.node"),
        _int(_need(start_doc, "counter", "start"), "start.counter"),
    )
    try:
        game = CountdownGame(
            tuple(_str(n, "exists_nodes") for n in exists_doc),
            tuple(_str(n, "forall_nodes") for n in forall_doc),
            tuple(moves),
        )
    except VassError as e:
        raise ValidationError([str(e)]) from None
    if start.node not in set(game.nodes):
        raise ValidationError([f"start node {start.node!r} not declared"])
    if start.counter < 0:
        raise ValidationError(["start counter must be a natural number"])
    return game, start


def serialize_game(game: CountdownGame, start: GameConfiguration) -> str:
    doc = {
        "exists_nodes": list(game.exists_nodes),
        "forall_nodes": list(game.forall_nodes),
        "transitions": [{"from": m.source, "weight": m.weight, "to": m.target}
                        for m in game.moves],
        "start": {"node": start.node, "counter": start.counter},
    }
    return _dumps(doc)


# ---------------------------------------------------------------------------
# Witnesses


_MODES = {"full-run": FullRun, "context": Context, "partial": Partial}


def serialize_witness(tree: RunTree) -> str:
    nodes: list[dict] = []
    # Preorder flattening without recursion; children indexes are assigned
    # as nodes are emitted, so shared subtrees are expanded into copies.
    stack: list[tuple[RunNode, Optional[dict]]] = [(tree.root, None)]
    while stack:
        node, parent_entry = stack.pop()
        entry = {
            "state": node.config.state,
            "vector": list(node.config.vector),
            "transition": node.transition,
            "children": [],
        }
        if parent_entry is not None:
            parent_entry["children"].append(len(nodes))
        nodes.append(entry)
        for child in reversed(node.children):
            stack.append((child, entry))
    mode = tree.mode
    doc: dict[str, Any] = {}
    if isinstance(mode, FullRun):
        doc["mode"] = "full-run"
    elif isinstance(mode, Context):
        doc["mode"] = "context"
        doc["target"] = {"state": mode.target.state, "vector": list(mode.target.vector)}
    else:
        doc["mode"] = "partial"
    doc["nodes"] = nodes
    return _dumps(doc)


def parse_witness(text: str, system: Optional[System] = None) -> RunTree:
    """Parse a witness document; with `system` given, transition indexes are
    range-checked against it (full validation stays with validate_run_tree)."""
    doc = _loads(text)
    _reject_extra(doc if isinstance(doc, dict) else {}, {"mode", "target", "nodes"}, "witness")
    mode_name = _str(_need(doc, "mode", "witness"), "mode")
    if mode_name not in _MODES:
        raise ParseError(f"unknown witness mode {mode_name!r}")
    if mode_name == "context":
        target_doc = _need(doc, "target", "witness")
        target = _parse_label(target_doc, "target")
        mode: Any = Context(target)
    else:
        if "target" in doc:
            raise ParseError(f"mode {mode_name!r} does not take a target")
        mode = _MODES[mode_name]()
    nodes_doc = _need(doc, "nodes", "witness")
    if not isinstance(nodes_doc, list) or not nodes_doc:
        raise ParseError("nodes: expected a non-empty list")
    parsed = []
    for i, n in enumerate(nodes_doc):
        where = f"nodes[{i}]"
        _reject_extra(n if isinstance(n, dict) else {},
                      {"state", "vector", "transition", "children"}, where)
        cfg = _parse_label(n, where)
        transition = _need(n, "transition", where)
        if transition is not None:
            transition = _int(transition, f"{where}.transition")
            if transition < 0:
                raise ParseError(f"{where}: negative transition index")
            if system is not None and transition >= len(system.transitions):
                raise ParseError(f"{where}: transition index {transition} out of range")
        children_doc = _need(n, "children", where)
        if not isinstance(children_doc, list):
            raise ParseError(f"{where}: children must be a list")
        children = [_int(c, f"{where}.children") for c in children_doc]
        for c in children:
            if not 0 < c < len(nodes_doc):
                raise ParseError(f"{where}: child index {c} out of range")
        parsed.append((cfg, transition, children))
    # Every node except the root must be referenced exactly once.
    refs = [c for _, _, children in parsed for c in children]
    if sorted(refs) != list(range(1, len(parsed))):
        raise ParseError("node array is not a tree (bad child references)")
    built: dict[int, RunNode] = {}
    stack = [0]
    while stack:
        i = stack[-1]
        cfg, transition, children = parsed[i]
        missing = [c for c in children if c not in built]
        if missing:
            stack.extend(missing)
            continue
        built[i] = RunNode(cfg, transition, tuple(built[c] for c in children))
        stack.pop()
    if len(built) != len(parsed):
        raise ParseError("node array is not a tree (unreachable nodes)")
    return RunTree(built[0], mode)


def _parse_label(doc: Any, where: str) -> Configuration:
    state = _str(_need(doc, "state", where), where)
    vec_doc = _need(doc, "vector", where)
    if not isinstance(vec_doc, list):
        raise ParseError(f"{where}: vector must be a list")
    return Configuration(state, tuple(_int(v, f"{where}.vector") for v in vec_doc))


# ---------------------------------------------------------------------------
# Configuration literals: p(3) or q(6,0)


_LITERAL = re.compile(r"^\s*([^()\s,]+)\s*\(\s*(-?\d+(?:\s*,\s*-?\d+)*)?\s*\)\s*$")


def parse_configuration(text: str, system: Optional[System] = None) -> Configuration:
    m = _LITERAL.match(text)
    if not m:
        raise ParseError(f"bad configuration literal {text!r}; expected like 'p(3)' or 'q(6,0)'")
    state = m.group(1)
    vector = tuple(int(v) for v in m.group(2).split(",")) if m.group(2) else ()
    cfg = Configuration(state, vector)
    if system is not None:
        if state not in system.state_index:
            raise ParseError(f"unknown state {state!r}")
        if len(vector) != system.dimension:
            raise ParseError(
                f"configuration {text!r} has arity {len(vector)}, "
                f"system dimension is {system.dimension}"
            )
    return cfg


def format_configuration(cfg: Configuration) -> str:
    return str(cfg)
