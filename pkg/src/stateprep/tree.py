"""Weighted binary tree encoding of a non-negative amplitude vector.

A length-``2**n`` vector is represented by a tree with ``2**n - 1`` nodes.
The node at level ``l`` (root is level 0) and position ``p`` has flat index
``f = 2**l - 1 + p``.  Each node stores the pair of edge weights to its
children, the y-rotation angle that prepares the corresponding single-qubit
state, and the norm of the amplitude block covered by its subtree.  The
product of edge weights along the path from the root to leaf ``i`` equals
amplitude ``x_i``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NegativeAmplitude, NonPowerOfTwoLength, UndefinedNode, ZeroVector

ZERO_NORM_TOL = 1e-12
STATE_EQ_TOL = 1e-12


@dataclass(frozen=True)
class AmplitudeTree:
    """Immutable angle tree for one input vector.

    All node arrays have length ``2**n - 1`` and are indexed by the flat
    node index ``f``.  Zero-norm nodes (no amplitude anywhere below them)
    have both weights, the angle and the norm set to zero and are flagged
    undefined in ``defined``.
    """

    n: int
    omega0: np.ndarray
    omega1: np.ndarray
    alpha: np.ndarray
    norm: np.ndarray
    defined: np.ndarray

    @property
    def num_nodes(self) -> int:
        return 2**self.n - 1


@dataclass(frozen=True)
class PruneAnnotations:
    """Per-node simplification flags derived from the tree.

    ``skip_rotation``: the loading rotation is the identity.
    ``trivial_subtree``: the subtree prepares ``|0...0>`` (zero-norm
    subtrees count as trivial since their wires are never touched).
    ``children_equal``: both child subtree states coincide, so the
    combining swap acts as the identity.  Only set below the leaf level.
    """

    skip_rotation: np.ndarray
    trivial_subtree: np.ndarray
    children_equal: np.ndarray


def level_of(f: int) -> int:
    return (f + 1).bit_length() - 1


def children_of(f: int) -> tuple[int, int]:
    return 2 * f + 1, 2 * f + 2


def pad_to_power_of_two(amplitudes) -> np.ndarray:
    """Append zeros until the length is a power of two (at least 2)."""
    x = np.atleast_1d(np.asarray(amplitudes, dtype=float))
    size = max(2, 1 << (int(len(x)) - 1).bit_length())
    if len(x) == size:
        return x
    return np.concatenate([x, np.zeros(size - len(x))])


def build_tree(amplitudes) -> AmplitudeTree:
    """Build the weighted tree for a non-negative vector of length ``2**n``.

    The vector is renormalized internally; entries must be real and
    non-negative.  Raises ``NonPowerOfTwoLength``, ``NegativeAmplitude``
    or ``ZeroVector`` on invalid input.
    """
    arr = np.asarray(amplitudes)
    if np.iscomplexobj(arr):
        if np.max(np.abs(arr.imag)) > ZERO_NORM_TOL:
            raise NegativeAmplitude("complex amplitudes are not supported")
        arr = arr.real
    x = np.asarray(arr, dtype=float)
    size = x.size
    if size < 2 or size & (size - 1):
        raise NonPowerOfTwoLength(f"length {size} is not a power of two >= 2")
    if np.min(x) < -ZERO_NORM_TOL:
        raise NegativeAmplitude(f"negative amplitude {np.min(x)}")
    x = np.clip(x, 0.0, None)
    total = float(np.linalg.norm(x))
    if total < ZERO_NORM_TOL:
        raise ZeroVector("input vector has zero norm")
    x = x / total

    n = size.bit_length() - 1
    omega0 = np.zeros(size - 1)
    omega1 = np.zeros(size - 1)
    norm = np.zeros(size - 1)
    defined = np.zeros(size - 1, dtype=bool)

    cur = x
    for level in range(n - 1, -1, -1):
        parent = np.sqrt(cur[0::2] ** 2 + cur[1::2] ** 2)
        base = 2**level - 1
        ok = parent > ZERO_NORM_TOL
        norm[base : base + 2**level] = np.where(ok, parent, 0.0)
        defined[base : base + 2**level] = ok
        with np.errstate(invalid="ignore", divide="ignore"):
            w0 = np.where(ok, cur[0::2] / np.where(ok, parent, 1.0), 0.0)
            w1 = np.where(ok, cur[1::2] / np.where(ok, parent, 1.0), 0.0)
        omega0[base : base + 2**level] = w0
        omega1[base : base + 2**level] = w1
        cur = np.where(ok, parent, 0.0)

    alpha = 2.0 * np.arcsin(np.clip(omega1, 0.0, 1.0))
    return AmplitudeTree(n=n, omega0=omega0, omega1=omega1, alpha=alpha, norm=norm, defined=defined)


def preorder(tree: AmplitudeTree) -> list[int]:
    """Node indices in root, left-subtree, right-subtree order."""
    out: list[int] = []
    stack = [0]
    last = tree.num_nodes
    while stack:
        f = stack.pop()
        out.append(f)
        left, right = children_of(f)
        if left < last:
            stack.append(right)
            stack.append(left)
    return out


def subtree_state(tree: AmplitudeTree, f: int) -> np.ndarray:
    """Normalized state of the ``n - level(f)`` qubits below node ``f``.

    Obtained by multiplying edge weights down the subtree; zero-norm
    branches contribute zero blocks.  Raises ``UndefinedNode`` when the
    node itself carries no amplitude.
    """
    if f < 0 or f >= tree.num_nodes:
        raise UndefinedNode(f"node index {f} out of range")
    if not tree.defined[f]:
        raise UndefinedNode(f"node {f} has zero norm")
    return _state_below(tree, f)


def _state_below(tree: AmplitudeTree, f: int) -> np.ndarray:
    if level_of(f) == tree.n - 1:
        return np.array([tree.omega0[f], tree.omega1[f]])
    left, right = children_of(f)
    half = 2 ** (tree.n - level_of(f) - 1)
    out = np.zeros(2 * half)
    if tree.omega0[f] > 0.0:
        out[:half] = tree.omega0[f] * _state_below(tree, left)
    if tree.omega1[f] > 0.0:
        out[half:] = tree.omega1[f] * _state_below(tree, right)
    return out


def state_or_ground(tree: AmplitudeTree, f: int) -> np.ndarray:
    """Like ``subtree_state`` but maps zero-norm subtrees to ``|0...0>``.

    Zero-norm wires are physically left in the ground state, so this is
    the state actually sitting in those registers.
    """
    if tree.defined[f]:
        return _state_below(tree, f)
    out = np.zeros(2 ** (tree.n - level_of(f)))
    out[0] = 1.0
    return out


def states_equal(a: np.ndarray, b: np.ndarray, tol: float = STATE_EQ_TOL) -> bool:
    a = _sign_fixed(a)
    b = _sign_fixed(b)
    return bool(np.max(np.abs(a - b)) <= tol)


def _sign_fixed(v: np.ndarray) -> np.ndarray:
    nz = np.flatnonzero(np.abs(v) > ZERO_NORM_TOL)
    if len(nz) and v[nz[0]] < 0:
        return -v
    return v


def prune(tree: AmplitudeTree) -> PruneAnnotations:
    """Compute the per-node simplification flags for ``tree``."""
    count = tree.num_nodes
    skip_rotation = np.abs(tree.alpha) <= ZERO_NORM_TOL
    trivial = np.zeros(count, dtype=bool)
    children_equal = np.zeros(count, dtype=bool)

    for f in range(count - 1, -1, -1):
        if not tree.defined[f]:
            trivial[f] = True
            continue
        if level_of(f) == tree.n - 1:
            trivial[f] = tree.omega1[f] <= ZERO_NORM_TOL
        else:
            left, _ = children_of(f)
            trivial[f] = tree.omega1[f] <= ZERO_NORM_TOL and trivial[left]

    for f in range(count):
        if level_of(f) >= tree.n - 1:
            continue
        left, right = children_of(f)
        children_equal[f] = states_equal(
            state_or_ground(tree, left), state_or_ground(tree, right)
        )
    return PruneAnnotations(
        skip_rotation=skip_rotation, trivial_subtree=trivial, children_equal=children_equal
    )
