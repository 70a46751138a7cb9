"""Interpolated synthesis: time-encoded sub-blocks combined bottom-up.

``lam`` controls the split point.  Subtrees of ``lam`` qubits are
prepared as multiplexed-rotation blocks on their own wires; everything
above is loaded as single-qubit controls and combined with controlled
swaps plus disentangling measurements, exactly as in the pure
divide-and-conquer circuit.  ``lam = 1`` reproduces that circuit and
``lam = n`` reproduces plain time encoding.
"""

from __future__ import annotations

from .circuit import Circuit
from .divide_conquer import DcOptions, synthesize_combine
from .errors import LambdaOutOfRange
from .tree import AmplitudeTree


def synthesize_hybrid(tree: AmplitudeTree, lam: int, opts: DcOptions | None = None) -> Circuit:
    if not 1 <= lam <= tree.n:
        raise LambdaOutOfRange(f"lambda {lam} outside 1..{tree.n}")
    return synthesize_combine(tree, lam, opts or DcOptions())
