"""Circuit intermediate representation.

Gates, mid-circuit measurements and classically conditioned operations are
stored as one flat op list.  Conditions are explicit truth tables over
previously written classical bits: ``table`` has one entry per assignment
of ``bits``, indexed with ``bits[0]`` as the most significant position.

Two depth figures are reported.  ``depth_gates`` layers only the loading
and combining unitaries (ops whose ``role`` is not measurement machinery
and that carry no classical condition); it is the figure the closed-form
resource expressions describe.  ``depth_full`` layers every op, including
basis-change rotations, measurements and conditioned corrections.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace

from .errors import InvalidCircuit, ParseError

KINDS = ("roty", "rotz", "z", "x", "h", "cswap", "mcroty", "measure", "reset")
UNITARY_KINDS = ("roty", "rotz", "z", "x", "h", "cswap", "mcroty")
ANGLE_KINDS = ("roty", "rotz", "mcroty")

ROLE_MEAS_BASIS = "meas_basis"
ROLE_CORRECT = "correct"
ROLE_LOAD = "load"
ROLE_COMBINE = "combine"


@dataclass(frozen=True)
class Condition:
    bits: tuple[int, ...]
    table: tuple[int, ...]

    def index_of(self, values: dict[int, int]) -> int:
        idx = 0
        for b in self.bits:
            idx = (idx << 1) | values[b]
        return idx


@dataclass(frozen=True)
class Gate:
    kind: str
    qubits: tuple[int, ...]
    angle: float | None = None
    clbit: int | None = None
    polarities: tuple[int, ...] | None = None
    condition: Condition | None = None
    role: str | None = None

    @property
    def is_unitary(self) -> bool:
        return self.kind in UNITARY_KINDS


def roty(q: int, theta: float, condition=None, role=None) -> Gate:
    return Gate("roty", (q,), angle=float(theta), condition=condition, role=role)


def rotz(q: int, phi: float, condition=None, role=None) -> Gate:
    return Gate("rotz", (q,), angle=float(phi), condition=condition, role=role)


def pauli_z(q: int, condition=None, role=None) -> Gate:
    return Gate("z", (q,), condition=condition, role=role)


def pauli_x(q: int, condition=None, role=None) -> Gate:
    return Gate("x", (q,), condition=condition, role=role)


def hadamard(q: int, condition=None, role=None) -> Gate:
    return Gate("h", (q,), condition=condition, role=role)


def cswap(control: int, target_a: int, target_b: int, role=None) -> Gate:
    return Gate("cswap", (control, target_a, target_b), role=role)


def mcroty(theta: float, controls, target: int, role=None) -> Gate:
    controls = tuple(controls)
    qubits = tuple(q for q, _ in controls) + (target,)
    pols = tuple(int(p) for _, p in controls)
    return Gate("mcroty", qubits, angle=float(theta), polarities=pols, role=role)


def measure(q: int, clbit: int) -> Gate:
    return Gate("measure", (q,), clbit=int(clbit))


def reset(q: int) -> Gate:
    return Gate("reset", (q,))


@dataclass(frozen=True)
class Circuit:
    n_qubits: int
    n_clbits: int
    ops: tuple[Gate, ...]
    data_qubits: tuple[int, ...]
    stage_reports: tuple = field(default=(), compare=False, repr=False)

    def validate(self) -> "Circuit":
        written: set[int] = set()
        for i, op in enumerate(self.ops):
            if op.kind not in KINDS:
                raise InvalidCircuit(f"op {i}: unknown kind {op.kind!r}")
            if len(set(op.qubits)) != len(op.qubits):
                raise InvalidCircuit(f"op {i}: repeated qubit in {op.qubits}")
            for q in op.qubits:
                if not 0 <= q < self.n_qubits:
                    raise InvalidCircuit(f"op {i}: qubit {q} out of range")
            if (op.angle is not None) != (op.kind in ANGLE_KINDS):
                raise InvalidCircuit(f"op {i}: angle mismatch for kind {op.kind!r}")
            if op.kind == "cswap" and len(op.qubits) != 3:
                raise InvalidCircuit(f"op {i}: cswap needs 3 qubits")
            if op.kind == "mcroty":
                if op.polarities is None or len(op.polarities) != len(op.qubits) - 1:
                    raise InvalidCircuit(f"op {i}: bad mcroty polarities")
                if any(p not in (0, 1) for p in op.polarities):
                    raise InvalidCircuit(f"op {i}: polarities must be 0/1")
            elif op.polarities is not None:
                raise InvalidCircuit(f"op {i}: polarities only valid on mcroty")
            if op.kind == "measure":
                if op.clbit is None or not 0 <= op.clbit < self.n_clbits:
                    raise InvalidCircuit(f"op {i}: bad clbit {op.clbit}")
                if op.clbit in written:
                    raise InvalidCircuit(f"op {i}: clbit {op.clbit} written twice")
                written.add(op.clbit)
            elif op.clbit is not None:
                raise InvalidCircuit(f"op {i}: clbit only valid on measure")
            if op.condition is not None:
                if op.kind in ("measure", "reset"):
                    raise InvalidCircuit(f"op {i}: conditions on {op.kind} unsupported")
                cond = op.condition
                if len(cond.table) != 2 ** len(cond.bits):
                    raise InvalidCircuit(f"op {i}: truth table length mismatch")
                if any(v not in (0, 1) for v in cond.table):
                    raise InvalidCircuit(f"op {i}: truth table entries must be 0/1")
                for b in cond.bits:
                    if b not in written:
                        raise InvalidCircuit(f"op {i}: condition reads unmeasured bit {b}")
        for q in self.data_qubits:
            if not 0 <= q < self.n_qubits:
                raise InvalidCircuit(f"data qubit {q} out of range")
        if len(set(self.data_qubits)) != len(self.data_qubits):
            raise InvalidCircuit("repeated data qubit")
        return self


@dataclass(frozen=True)
class ResourceReport:
    qubits: int
    unit_cswaps: int
    depth_gates: int
    depth_full: int


def _asap_layers(ops, keep) -> list[int | None]:
    """ASAP layer per op (None for ops not kept).

    An op starts one layer after the latest op sharing a wire or, for
    conditioned ops, after the measurement writing any bit it reads.
    """
    wire_free: dict[int, int] = {}
    bit_ready: dict[int, int] = {}
    out: list[int | None] = []
    for op in ops:
        if not keep(op):
            out.append(None)
            continue
        layer = 0
        for q in op.qubits:
            layer = max(layer, wire_free.get(q, 0))
        if op.condition is not None:
            for b in op.condition.bits:
                layer = max(layer, bit_ready.get(b, 0))
        out.append(layer)
        for q in op.qubits:
            wire_free[q] = layer + 1
        if op.kind == "measure":
            bit_ready[op.clbit] = layer + 1
    return out


def _counts_for_gates(op: Gate) -> bool:
    return op.is_unitary and op.condition is None and op.role != ROLE_MEAS_BASIS


def layers(circuit: Circuit, full: bool = True) -> list[int | None]:
    """Layer index per op; with ``full=False`` only the gate-depth ops."""
    keep = (lambda op: True) if full else _counts_for_gates
    return _asap_layers(circuit.ops, keep)


def metrics(circuit: Circuit) -> ResourceReport:
    circuit.validate()
    gate_layers = [v for v in _asap_layers(circuit.ops, _counts_for_gates) if v is not None]
    full_layers = [v for v in _asap_layers(circuit.ops, lambda op: True) if v is not None]
    return ResourceReport(
        qubits=circuit.n_qubits,
        unit_cswaps=sum(1 for op in circuit.ops if op.kind == "cswap"),
        depth_gates=1 + max(gate_layers) if gate_layers else 0,
        depth_full=1 + max(full_layers) if full_layers else 0,
    )


def _format_angle(a: float) -> float:
    return float(f"{a:.12g}")


def _op_to_dict(op: Gate) -> dict:
    doc: dict = {"kind": op.kind, "qubits": list(op.qubits)}
    if op.angle is not None:
        doc["angle"] = _format_angle(op.angle)
    if op.clbit is not None:
        doc["clbit"] = op.clbit
    if op.polarities is not None:
        doc["polarities"] = list(op.polarities)
    if op.condition is not None:
        doc["condition"] = {
            "bits": list(op.condition.bits),
            "table": list(op.condition.table),
        }
    if op.role is not None:
        doc["role"] = op.role
    return doc


def serialize(circuit: Circuit) -> str:
    circuit.validate()
    doc = {
        "n_qubits": circuit.n_qubits,
        "n_clbits": circuit.n_clbits,
        "data_qubits": list(circuit.data_qubits),
        "ops": [_op_to_dict(op) for op in circuit.ops],
    }
    return json.dumps(doc, indent=2) + "\n"


def _expect(doc: dict, key: str, types, where: str):
    if key not in doc:
        raise ParseError(f"missing field {key!r}", where)
    value = doc[key]
    if not isinstance(value, types):
        raise ParseError(f"field {key!r} has wrong type", f"{where}.{key}")
    return value


def _parse_int_list(value, where: str) -> list[int]:
    if not isinstance(value, list) or not all(isinstance(v, int) for v in value):
        raise ParseError("expected a list of integers", where)
    return value


def _parse_op(doc, i: int) -> Gate:
    where = f"ops[{i}]"
    if not isinstance(doc, dict):
        raise ParseError("op is not an object", where)
    known = {"kind", "qubits", "angle", "clbit", "polarities", "condition", "role"}
    for key in doc:
        if key not in known:
            raise ParseError(f"unknown field {key!r}", f"{where}.{key}")
    kind = _expect(doc, "kind", str, where)
    if kind not in KINDS:
        raise ParseError(f"unknown op kind {kind!r}", f"{where}.kind")
    qubits = tuple(_parse_int_list(_expect(doc, "qubits", list, where), f"{where}.qubits"))
    angle = doc.get("angle")
    if angle is not None and not isinstance(angle, (int, float)):
        raise ParseError("angle must be a number", f"{where}.angle")
    clbit = doc.get("clbit")
    if clbit is not None and not isinstance(clbit, int):
        raise ParseError("clbit must be an integer", f"{where}.clbit")
    pols = doc.get("polarities")
    if pols is not None:
        pols = tuple(_parse_int_list(pols, f"{where}.polarities"))
    condition = None
    if "condition" in doc:
        cond = doc["condition"]
        if not isinstance(cond, dict):
            raise ParseError("condition is not an object", f"{where}.condition")
        bits = tuple(_parse_int_list(_expect(cond, "bits", list, f"{where}.condition"),
                                     f"{where}.condition.bits"))
        table = tuple(_parse_int_list(_expect(cond, "table", list, f"{where}.condition"),
                                      f"{where}.condition.table"))
        condition = Condition(bits=bits, table=table)
    role = doc.get("role")
    if role is not None and not isinstance(role, str):
        raise ParseError("role must be a string", f"{where}.role")
    return Gate(
        kind=kind,
        qubits=qubits,
        angle=float(angle) if angle is not None else None,
        clbit=clbit,
        polarities=pols,
        condition=condition,
        role=role,
    )


def deserialize(text: str) -> Circuit:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", f"offset {exc.pos}") from exc
    if not isinstance(doc, dict):
        raise ParseError("document is not an object", "$")
    n_qubits = _expect(doc, "n_qubits", int, "$")
    n_clbits = _expect(doc, "n_clbits", int, "$")
    data_qubits = tuple(
        _parse_int_list(_expect(doc, "data_qubits", list, "$"), "$.data_qubits")
    )
    ops_doc = _expect(doc, "ops", list, "$")
    ops = tuple(_parse_op(op, i) for i, op in enumerate(ops_doc))
    circuit = Circuit(n_qubits=n_qubits, n_clbits=n_clbits, ops=ops, data_qubits=data_qubits)
    try:
        circuit.validate()
    except InvalidCircuit as exc:
        raise ParseError(str(exc), "$.ops") from exc
    return circuit


def with_ops(circuit: Circuit, ops) -> Circuit:
    return replace(circuit, ops=tuple(ops))
