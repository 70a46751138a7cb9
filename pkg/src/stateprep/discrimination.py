"""Adaptive local-measurement discrimination of two orthogonal states.

Any pair of orthogonal ``m``-qubit states can be told apart perfectly by
measuring one qubit at a time, feeding each outcome forward to pick the
next measurement basis.  The construction splits off the first qubit,
finds a 2x2 unitary that removes the same-index overlaps between the two
conditional residuals, and recurses on the residual pair for each
outcome.  The result is a binary decision tree of depth ``m`` whose
leaves are labelled with the identified state.

For real input pairs every basis in the tree is a plane rotation, and the
stored ``angle`` is the y-rotation that maps the basis to the
computational axes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import DimensionMismatch, NotOrthogonal, TraceNotZero

ORTH_TOL = 1e-10
DEGENERATE_TOL = 1e-12


@dataclass(frozen=True)
class OrthPair:
    """Two orthonormal states of ``m`` qubits."""

    plus: np.ndarray
    minus: np.ndarray
    m: int

    @classmethod
    def from_states(cls, plus, minus) -> "OrthPair":
        plus = np.asarray(plus, dtype=complex).reshape(-1)
        minus = np.asarray(minus, dtype=complex).reshape(-1)
        if plus.shape != minus.shape:
            raise DimensionMismatch(f"{plus.shape} vs {minus.shape}")
        dim = plus.size
        if dim < 2 or dim & (dim - 1):
            raise DimensionMismatch(f"dimension {dim} is not a power of two >= 2")
        np_, nm = np.linalg.norm(plus), np.linalg.norm(minus)
        if np_ < ORTH_TOL or nm < ORTH_TOL:
            raise NotOrthogonal("zero-norm input state")
        plus, minus = plus / np_, minus / nm
        if abs(np.vdot(plus, minus)) > ORTH_TOL:
            raise NotOrthogonal(f"overlap {abs(np.vdot(plus, minus)):.3e} exceeds tolerance")
        return cls(plus=plus, minus=minus, m=dim.bit_length() - 1)


@dataclass(frozen=True)
class PlanLeaf:
    label: str  # "+" or "-"


@dataclass(frozen=True)
class PlanNode:
    """Measure the next qubit in the basis given by the rows of ``basis``;
    continue with ``on0``/``on1`` according to the outcome."""

    basis: np.ndarray
    angle: float | None
    on0: Union["PlanNode", PlanLeaf]
    on1: Union["PlanNode", PlanLeaf]


@dataclass(frozen=True)
class AdaptiveMeasPlan:
    m: int
    root: PlanNode

    def paths(self) -> list[tuple[tuple[int, ...], str]]:
        """All (outcome path, leaf label) pairs in lexicographic order."""
        out: list[tuple[tuple[int, ...], str]] = []

        def walk(node, prefix):
            if isinstance(node, PlanLeaf):
                out.append((prefix, node.label))
                return
            walk(node.on0, prefix + (0,))
            walk(node.on1, prefix + (1,))

        walk(self.root, ())
        return out


def solve_ua(eta0, eta1, nu0, nu1) -> tuple[float, float]:
    """Parameters (theta, omega) of the first-qubit basis change.

    The returned unitary ``[[cos t, sin t e^{i w}], [sin t e^{-i w},
    -cos t]]`` zeroes both same-index overlaps between the transformed
    residual families.  Raises ``TraceNotZero`` when the inputs do not
    come from an orthogonal pair.
    """
    eta0 = np.asarray(eta0, dtype=complex).reshape(-1)
    eta1 = np.asarray(eta1, dtype=complex).reshape(-1)
    nu0 = np.asarray(nu0, dtype=complex).reshape(-1)
    nu1 = np.asarray(nu1, dtype=complex).reshape(-1)
    m00 = np.vdot(nu0, eta0)
    m11 = np.vdot(nu1, eta1)
    if abs(m00 + m11) > ORTH_TOL:
        raise TraceNotZero(f"sum of same-index overlaps is {abs(m00 + m11):.3e}")
    if abs(m00) < DEGENERATE_TOL and abs(m11) < DEGENERATE_TOL:
        return 0.0, 0.0

    p = np.vdot(nu1, eta0)
    q = np.vdot(nu0, eta1)
    a = m00 - m11

    # Phase alignment: pick omega so the off-diagonal combination shares
    # the phase of the diagonal difference.  The sign conventions follow
    # the row-splitting used here (first-qubit block rows), which negates
    # the numerator relative to the transposed-overlap convention.
    omega_n = a.imag * (p + q).real - a.real * (p + q).imag
    omega_d = a.real * (p - q).real + a.imag * (p - q).imag
    if abs(omega_n) < DEGENERATE_TOL:
        # omega = 0 and omega = pi both align the phases when the
        # numerator vanishes; zero keeps real inputs on real bases.
        omega = 0.0
    else:
        omega = -float(np.arctan2(omega_n, omega_d))

    b = q * np.exp(1j * omega) + p * np.exp(-1j * omega)
    if abs(a.imag) < DEGENERATE_TOL and abs(b.imag) < DEGENERATE_TOL:
        # Real case: numerator/denominator are plain real parts.
        theta_n, theta_d = a.real, b.real
    else:
        # Project onto the common phase so the arctangent stays real.
        ref = a if abs(a) >= abs(b) else b
        ref = ref / abs(ref)
        theta_n = (a / ref).real
        theta_d = (b / ref).real
    if abs(theta_n) < DEGENERATE_TOL and abs(theta_d) < DEGENERATE_TOL:
        return 0.0, omega
    theta = 0.5 * float(np.arctan2(-theta_n, theta_d))
    return theta, omega


def _sign_fixed(v: np.ndarray) -> np.ndarray:
    nz = np.flatnonzero(np.abs(v) > DEGENERATE_TOL)
    if not len(nz):
        return v
    phase = v[nz[0]] / abs(v[nz[0]])
    return v / phase


def _is_real(v: np.ndarray) -> bool:
    return bool(np.max(np.abs(v.imag)) < 1e-12)


def _basis_node(plus: np.ndarray, minus: np.ndarray):
    """Measurement basis (rows) for a single-qubit pair, plus rotation angle."""
    plus = _sign_fixed(plus)
    minus = _sign_fixed(minus)
    if _is_real(plus) and _is_real(minus):
        angle = -2.0 * float(np.arctan2(plus[1].real, plus[0].real))
        c, s = np.cos(angle / 2.0), np.sin(angle / 2.0)
        basis = np.array([[c, -s], [s, c]], dtype=complex)
        return basis, angle
    return np.array([plus.conj(), minus.conj()]), None


def _orthogonal_filler(v: np.ndarray) -> np.ndarray:
    """Any unit vector orthogonal to unit ``v``."""
    dim = v.size
    best, best_norm = None, -1.0
    for j in range(dim):
        cand = np.zeros(dim, dtype=complex)
        cand[j] = 1.0
        cand = cand - np.vdot(v, cand) * v
        norm = np.linalg.norm(cand)
        if norm > best_norm:
            best, best_norm = cand, norm
    return best / best_norm


def _decompose_pair(plus: np.ndarray, minus: np.ndarray):
    dim = plus.size
    if dim == 2:
        basis, angle = _basis_node(plus, minus)
        return PlanNode(basis=basis, angle=angle, on0=PlanLeaf("+"), on1=PlanLeaf("-"))

    half = dim // 2
    eta = (plus[:half], plus[half:])
    nu = (minus[:half], minus[half:])
    theta, omega = solve_ua(eta[0], eta[1], nu[0], nu[1])
    c, s = np.cos(theta), np.sin(theta)
    ua = np.array([[c, s * np.exp(1j * omega)], [s * np.exp(-1j * omega), -c]])
    if abs(omega) < DEGENERATE_TOL and _is_real(plus) and _is_real(minus):
        angle = -2.0 * theta
        cc, ss = np.cos(angle / 2.0), np.sin(angle / 2.0)
        basis = np.array([[cc, -ss], [ss, cc]], dtype=complex)
        rows = basis
    else:
        angle = None
        rows = ua
        basis = ua

    children = []
    for a in (0, 1):
        eta_a = rows[a, 0] * eta[0] + rows[a, 1] * eta[1]
        nu_a = rows[a, 0] * nu[0] + rows[a, 1] * nu[1]
        ne, nn = np.linalg.norm(eta_a), np.linalg.norm(nu_a)
        if ne > DEGENERATE_TOL and nn > DEGENERATE_TOL:
            eta_a, nu_a = eta_a / ne, nu_a / nn
            drift = abs(np.vdot(eta_a, nu_a))
            if drift > 1e-5:
                raise NotOrthogonal(
                    f"residual pair overlap {drift:.3e} after basis change"
                )
            # The exact residuals are orthogonal; cancellation noise on
            # near-dead outcomes can leave a small computed overlap.
            # Re-orthogonalizing keeps the plan bases exactly valid.
            if drift > 0.0:
                nu_a = nu_a - np.vdot(eta_a, nu_a) * eta_a
                nu_a = nu_a / np.linalg.norm(nu_a)
        elif nn > DEGENERATE_TOL:
            nu_a = nu_a / nn
            eta_a = _orthogonal_filler(nu_a)
        elif ne > DEGENERATE_TOL:
            eta_a = eta_a / ne
            nu_a = _orthogonal_filler(eta_a)
        else:
            # Dead branch: neither state reaches this outcome.
            eta_a = np.zeros(half, dtype=complex)
            eta_a[0] = 1.0
            nu_a = _orthogonal_filler(eta_a)
        children.append(_decompose_pair(_sign_fixed(eta_a), _sign_fixed(nu_a)))

    return PlanNode(basis=basis, angle=angle, on0=children[0], on1=children[1])


def decompose(pair: OrthPair) -> AdaptiveMeasPlan:
    """Adaptive single-qubit measurement plan discriminating ``pair``.

    The first measured qubit is the most significant one; each recursion
    level measures the next lower qubit conditioned on all previous
    outcomes.
    """
    return AdaptiveMeasPlan(m=pair.m, root=_decompose_pair(pair.plus, pair.minus))


def evaluate_plan(plan: AdaptiveMeasPlan, state) -> list[tuple[tuple[int, ...], str, float]]:
    """Outcome distribution of running ``plan`` on ``state``.

    Returns one entry per outcome path: (path, leaf label, probability).
    Probabilities sum to one.
    """
    state = np.asarray(state, dtype=complex).reshape(-1)
    if state.size != 2**plan.m:
        raise DimensionMismatch(f"state dimension {state.size}, plan expects {2 ** plan.m}")
    norm = np.linalg.norm(state)
    if norm == 0.0:
        raise DimensionMismatch("zero-norm state")
    out: list[tuple[tuple[int, ...], str, float]] = []

    def walk(node, vec, prefix):
        # Probability bookkeeping via unnormalized residuals.
        half = vec.size // 2
        blocks = (vec[:half], vec[half:])
        for a, child in ((0, node.on0), (1, node.on1)):
            comp = node.basis[a, 0] * blocks[0] + node.basis[a, 1] * blocks[1]
            if isinstance(child, PlanLeaf):
                out.append((prefix + (a,), child.label, float(np.vdot(comp, comp).real)))
            else:
                walk(child, comp, prefix + (a,))

    walk(plan.root, state / norm, ())
    return out
