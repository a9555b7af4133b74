"""Boolean circuits of NOT and 2-input NAND gates.

Netlist format, one statement per line::

    INPUT x1
    NOT g1 x1
    NAND g2 g1 1
    OUTPUT g2

``1`` is the constant-one node. Blank lines and ``#`` comments are ignored.
A circuit is *valid* when every NAND has two different inputs and every input
bit feeds exactly one gate, which is a NOT (or a NAND with the constant).
The *canonical* form replaces NOTs by NANDs with the constant, names inputs
``x1..xn`` and gates ``g1..gK`` in reverse topological order (``g1`` is the
output) and drops gates the output does not depend on, except input buffers.
"""

from __future__ import annotations

import itertools
import random
import re
from dataclasses import dataclass
from typing import Iterable, Sequence

ONE = "1"
_ID = re.compile(r"[a-z0-9_]+\Z")


class CircuitError(ValueError):
    def __init__(self, message, line=None, column=None):
        where = f"line {line}, column {column}: " if line is not None else ""
        super().__init__(where + message)
        self.line = line
        self.column = column


@dataclass(frozen=True)
class Gate:
    id: str
    kind: str  # "NOT" or "NAND"
    inputs: tuple[str, ...]


@dataclass(frozen=True)
class Circuit:
    inputs: tuple[str, ...]
    gates: tuple[Gate, ...]
    output: str

    @property
    def gate_map(self) -> dict[str, Gate]:
        return {g.id: g for g in self.gates}

    def successors(self) -> dict[str, list[str]]:
        """Consumers of every node (inputs, gates and the constant)."""
        succ = {v: [] for v in (ONE, *self.inputs, *(g.id for g in self.gates))}
        for g in self.gates:
            for s in g.inputs:
                succ[s].append(g.id)
        return succ


# -- parsing -----------------------------------------------------------------

def parse(text: str) -> Circuit:
    inputs, gates, outputs = [], [], []
    where = {}  # id -> (line, column)
    refs = []   # (source id, line, column)
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        tokens = [(m.group(), m.start() + 1) for m in re.finditer(r"\S+", line)]
        if not tokens:
            continue
        op, opcol = tokens[0]
        args = tokens[1:]
        arity = {"INPUT": 1, "OUTPUT": 1, "NOT": 2, "NAND": 3}.get(op)
        if arity is None:
            raise CircuitError(f"unknown statement {op!r}", lineno, opcol)
        if len(args) != arity:
            raise CircuitError(f"{op} takes {arity} operand(s), got {len(args)}", lineno, opcol)
        for tok, col in args:
            if not _ID.match(tok):
                raise CircuitError(f"bad identifier {tok!r}", lineno, col)
        if op == "OUTPUT":
            outputs.append(args[0])
            refs.append((args[0][0], lineno, args[0][1]))
            continue
        name, col = args[0]
        if name == ONE:
            raise CircuitError("'1' is reserved for the constant input", lineno, col)
        if name in where:
            first = where[name][0]
            raise CircuitError(f"duplicate id {name!r} (first defined on line {first})", lineno, col)
        where[name] = (lineno, col)
        if op == "INPUT":
            inputs.append(name)
            continue
        srcs = tuple(t for t, _ in args[1:])
        if op == "NAND" and srcs[0] == srcs[1]:
            raise CircuitError(f"NAND {name!r} has two equal inputs", lineno, args[2][1])
        refs.extend((t, lineno, c) for t, c in args[1:])
        gates.append(Gate(name, op, srcs))
    for ref, lineno, col in refs:
        if ref != ONE and ref not in where:
            raise CircuitError(f"reference to undefined id {ref!r}", lineno, col)
    if len(outputs) != 1:
        raise CircuitError(f"expected exactly one OUTPUT, found {len(outputs)}")
    circuit = Circuit(tuple(inputs), tuple(gates), outputs[0][0])
    cycle = _find_cycle(circuit)
    if cycle:
        line, col = where[cycle[0]]
        raise CircuitError("cycle through " + " -> ".join(cycle), line, col)
    return circuit


def _find_cycle(c: Circuit):
    gmap = c.gate_map
    state = {}
    for root in gmap:
        if root in state:
            continue
        stack = [(root, iter(gmap[root].inputs))]
        path = [root]
        state[root] = 1
        while stack:
            node, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                stack.pop()
                path.pop()
                state[node] = 2
            elif nxt in gmap:
                if state.get(nxt) == 1:
                    return path[path.index(nxt):] + [nxt]
                if nxt not in state:
                    state[nxt] = 1
                    path.append(nxt)
                    stack.append((nxt, iter(gmap[nxt].inputs)))
    return None


def serialize(c: Circuit) -> str:
    lines = [f"INPUT {x}" for x in c.inputs]
    lines += [f"{g.kind} {g.id} {' '.join(g.inputs)}" for g in c.gates]
    lines.append(f"OUTPUT {c.output}")
    return "\n".join(lines) + "\n"


def load(path) -> Circuit:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())


# -- semantics ---------------------------------------------------------------

def _bits(c: Circuit, assignment) -> tuple[int, ...]:
    if isinstance(assignment, str):
        if set(assignment) - {"0", "1"}:
            raise ValueError(f"assignment must be a bit string, got {assignment!r}")
        assignment = [int(b) for b in assignment]
    bits = tuple(int(b) for b in assignment)
    if len(bits) != len(c.inputs):
        raise ValueError(f"assignment has {len(bits)} bits, circuit has {len(c.inputs)} inputs")
    if any(b not in (0, 1) for b in bits):
        raise ValueError("assignment entries must be 0 or 1")
    return bits


def values(c: Circuit, assignment) -> dict[str, int]:
    """Bit carried by every node of the circuit on the given input."""
    val = {ONE: 1, **dict(zip(c.inputs, _bits(c, assignment)))}
    gmap = c.gate_map
    for gid in topological_order(c):
        g = gmap[gid]
        a = [val[s] for s in g.inputs]
        val[gid] = 1 - a[0] if g.kind == "NOT" else 1 - (a[0] & a[1])
    return val


def evaluate(c: Circuit, assignment) -> int:
    return values(c, assignment)[c.output]


def topological_order(c: Circuit) -> list[str]:
    """Gate ids with every gate after its sources."""
    gmap = c.gate_map
    seen, order = set(), []
    for root in gmap:
        if root in seen:
            continue
        seen.add(root)
        stack = [(root, iter(gmap[root].inputs))]
        while stack:
            node, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                stack.pop()
                order.append(node)
            elif nxt in gmap and nxt not in seen:
                seen.add(nxt)
                stack.append((nxt, iter(gmap[nxt].inputs)))
    return order


def assignments(n: int) -> Iterable[tuple[int, ...]]:
    return itertools.product((0, 1), repeat=n)


def satisfying_assignments(c: Circuit) -> list[tuple[int, ...]]:
    return [x for x in assignments(len(c.inputs)) if evaluate(c, x)]


def is_satisfiable(c: Circuit) -> bool:
    return any(evaluate(c, x) for x in assignments(len(c.inputs)))


# -- structural transformations ----------------------------------------------

def _fresh(base: str, taken: set[str]) -> str:
    name = base
    while name in taken:
        name += "_"
    taken.add(name)
    return name


def is_valid(c: Circuit) -> bool:
    gmap = c.gate_map
    if c.output not in gmap:
        return False
    for g in c.gates:
        if g.kind == "NAND" and g.inputs[0] == g.inputs[1]:
            return False
        if g.kind == "NOT" and g.inputs[0] == ONE:
            return False
    succ = c.successors()
    for x in c.inputs:
        if len(succ[x]) != 1:
            return False
        g = gmap[succ[x][0]]
        if g.kind == "NAND" and ONE not in g.inputs:
            return False
    return True


def make_valid(c: Circuit) -> Circuit:
    """Put a NOT buffer behind every input bit.

    The result ``C`` satisfies ``C(not x) == c(x)`` for every ``x``.
    """
    taken = {ONE, *c.inputs, *(g.id for g in c.gates)}
    buffer = {x: _fresh(f"not_{x}", taken) for x in c.inputs}
    gates = [Gate(buffer[x], "NOT", (x,)) for x in c.inputs]
    for g in c.gates:
        gates.append(Gate(g.id, g.kind, tuple(buffer.get(s, s) for s in g.inputs)))
    return Circuit(c.inputs, tuple(gates), buffer.get(c.output, c.output))


def negate_output(c: Circuit) -> Circuit:
    taken = {ONE, *c.inputs, *(g.id for g in c.gates)}
    neg = _fresh("neg", taken)
    return Circuit(c.inputs, c.gates + (Gate(neg, "NOT", (c.output,)),), neg)


def canonicalize(c: Circuit) -> Circuit:
    """Canonical form of a valid circuit (see module docstring)."""
    if not is_valid(c):
        raise CircuitError("circuit is not valid; apply make_valid first")
    gmap = c.gate_map
    # Reverse postorder from the output, sources visited in id order.
    post, seen = [], {c.output}
    stack = [(c.output, iter(sorted(s for s in gmap[c.output].inputs if s in gmap)))]
    while stack:
        node, it = stack[-1]
        nxt = next(it, None)
        if nxt is None:
            stack.pop()
            post.append(node)
        elif nxt not in seen:
            seen.add(nxt)
            stack.append((nxt, iter(sorted(s for s in gmap[nxt].inputs if s in gmap))))
    inputs = set(c.inputs)
    idle = sorted(g.id for g in c.gates if g.id not in seen and inputs & set(g.inputs))
    order = idle + post
    K = len(order)
    rename = {ONE: ONE}
    rename.update({x: f"x{i}" for i, x in enumerate(c.inputs, 1)})
    rename.update({gid: f"g{K - pos}" for pos, gid in enumerate(order)})

    def key(s):
        return (0, int(rename[s][1:])) if s != ONE else (1, 0)

    gates = []
    for gid in reversed(order):
        g = gmap[gid]
        srcs = g.inputs + (ONE,) if g.kind == "NOT" else g.inputs
        gates.append(Gate(rename[gid], "NAND", tuple(rename[s] for s in sorted(srcs, key=key))))
    return Circuit(tuple(rename[x] for x in c.inputs), tuple(gates), "g1")


def gate_index(gate_id: str) -> int:
    return int(gate_id[1:])


def is_canonical(c: Circuit) -> bool:
    if not is_valid(c) or c.output != "g1":
        return False
    if c.inputs != tuple(f"x{i}" for i in range(1, len(c.inputs) + 1)):
        return False
    if tuple(g.id for g in c.gates) != tuple(f"g{k}" for k in range(1, len(c.gates) + 1)):
        return False
    for k, g in enumerate(c.gates, 1):
        if g.kind != "NAND":
            return False
        for s in g.inputs:
            if s in c.inputs and ONE not in g.inputs:
                return False
            if s.startswith("g") and gate_index(s) <= k:
                return False
    return True


# -- generators ----------------------------------------------------------------

def random_circuit(rng: random.Random, inputs: int, gates: int, not_share=0.3) -> Circuit:
    """Random raw circuit over inputs ``x1..`` with the last gate as output."""
    nodes = [f"x{i}" for i in range(1, inputs + 1)]
    out = []
    for j in range(1, gates + 1):
        gid = f"h{j}"
        if rng.random() < not_share or len(nodes) < 2:
            out.append(Gate(gid, "NOT", (rng.choice(nodes),)))
        else:
            out.append(Gate(gid, "NAND", tuple(rng.sample(nodes, 2))))
        nodes.append(gid)
    return Circuit(tuple(nodes[:inputs]), tuple(out), out[-1].id)


def canonical_circuits(max_gates: int) -> Iterable[Circuit]:
    """Every canonical circuit with 1..max_gates gates, each exactly once."""
    for K in range(1, max_gates + 1):
        choices = []
        for k in range(1, K + 1):
            later = [f"g{j}" for j in range(k + 1, K + 1)] + [ONE]
            opts = [None]  # None marks an input buffer
            opts += [pair for pair in itertools.combinations(later, 2)]
            choices.append(opts)
        for pick in itertools.product(*choices):
            inputs, gates = [], []
            for k in range(K, 0, -1):
                p = pick[k - 1]
                if p is None:
                    x = f"x{len(inputs) + 1}"
                    inputs.append(x)
                    p = (x, ONE)
                gates.append(Gate(f"g{k}", "NAND", p))
            c = Circuit(tuple(inputs), tuple(reversed(gates)), "g1")
            if is_valid(c) and canonicalize(c) == c:
                yield c


def five_gate_example() -> Circuit:
    """Two-input example with NOT buffers on both inputs and one inner NOT."""
    return parse(
        "INPUT x1\nINPUT x2\n"
        "NOT a x1\nNOT b x2\n"
        "NAND c a b\nNOT e c\n"
        "NAND f e b\n"
        "OUTPUT f\n"
    )
