"""Full-separability test for pure states.

A pure state is a product of single-qubit states iff, for every qubit ``k``,
the ``2 x 2**(n-1)`` matrix of amplitudes (qubit ``k`` against the rest) has
rank one. Each cut is checked against its dominant column: every other
column must be parallel to it, i.e. each 2x2 minor formed with that column
must vanish within ``tol``. The normalized dominant column is the qubit's
factor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from sepsim.oracles import LinearBooleanFunction
from sepsim.state import StateVector

DEFAULT_TOL = 1e-9
TAU = 2.0 * math.pi


def wrap_angle(a: float) -> float:
    """Map an angle into ``[0, 2*pi)``."""
    r = math.remainder(a, TAU)
    if r < 0.0:
        r += TAU
    if r >= TAU:
        r = 0.0
    return r


def angular_distance(a: float, b: float) -> float:
    return abs(math.remainder(a - b, TAU))


@dataclass(frozen=True)
class ProductDecomposition:
    """``exp(i*global_phase) * prod_k (cos t_k|0> + exp(i*p_k) sin t_k|1>)``.

    ``factors[k-1]`` holds ``(theta, phi)`` for qubit ``k``.
    """

    global_phase: float
    factors: tuple[tuple[float, float], ...]

    @property
    def n(self) -> int:
        return len(self.factors)

    def qubit_state(self, k: int) -> np.ndarray:
        theta, phi = self.factors[k - 1]
        return np.array([math.cos(theta), np.exp(1j * phi) * math.sin(theta)])


@dataclass(frozen=True)
class EntanglementWitness:
    """A non-vanishing 2x2 minor across the cut at ``qubit``.

    ``i`` and ``j`` are basis indices with the qubit's bit clear; the minor
    is ``amp[i]*amp[j|b] - amp[j]*amp[i|b]`` with ``b`` that qubit's bit.
    """

    qubit: int
    i: int
    j: int
    minor: complex

    @property
    def magnitude(self) -> float:
        return abs(self.minor)

    def recompute(self, state: StateVector) -> complex:
        bit = 1 << (state.n - self.qubit)
        amps = state.amplitudes
        return complex(amps[self.i] * amps[self.j | bit] - amps[self.j] * amps[self.i | bit])


@dataclass(frozen=True)
class Separable:
    decomposition: ProductDecomposition
    tol: float
    separable = True


@dataclass(frozen=True)
class Entangled:
    witness: EntanglementWitness
    tol: float
    separable = False


SeparabilityVerdict = Union[Separable, Entangled]


def _canonical_factor(u: np.ndarray, snap: float) -> tuple[float, float, complex]:
    """Return ``(theta, phi, phase)`` with ``u = phase * (cos t, e^{i phi} sin t)``."""
    r0, r1 = abs(u[0]), abs(u[1])
    if r1 <= snap:
        return 0.0, 0.0, u[0] / r0
    if r0 <= snap:
        return math.pi / 2, 0.0, u[1] / r1
    theta = math.atan2(r1, r0)
    phi = wrap_angle(float(np.angle(u[1]) - np.angle(u[0])))
    return theta, phi, u[0] / r0


def _cut_matrix(amps: np.ndarray, n: int, k: int) -> np.ndarray:
    return amps.reshape(1 << (k - 1), 2, 1 << (n - k)).transpose(1, 0, 2).reshape(2, -1)


def _column_to_index(col: int, n: int, k: int) -> int:
    high, low = divmod(col, 1 << (n - k))
    return (high << (n - k + 1)) | low


def factor_state(state: StateVector, tol: float = DEFAULT_TOL) -> SeparabilityVerdict:
    state.require_normalized()
    n = state.n
    amps = state.amplitudes
    factors: list[tuple[float, float]] = []
    for k in range(1, n + 1):
        m = _cut_matrix(amps, n, k)
        j = int(np.argmax(np.abs(m[0]) ** 2 + np.abs(m[1]) ** 2))
        minors = m[0, j] * m[1] - m[1, j] * m[0]
        i = int(np.argmax(np.abs(minors)))
        if abs(minors[i]) > tol:
            witness = EntanglementWitness(
                qubit=k,
                i=_column_to_index(j, n, k),
                j=_column_to_index(i, n, k),
                minor=complex(minors[i]),
            )
            return Entangled(witness, tol)
        col = m[:, j]
        theta, phi, _ = _canonical_factor(col / np.linalg.norm(col), tol)
        factors.append((theta, phi))

    # global phase from the largest amplitude, where it is best conditioned
    x = int(np.argmax(np.abs(amps)))
    prod = 1.0 + 0.0j
    for k, (theta, phi) in enumerate(factors, start=1):
        if (x >> (n - k)) & 1:
            prod *= np.exp(1j * phi) * math.sin(theta)
        else:
            prod *= math.cos(theta)
    gamma = wrap_angle(float(np.angle(amps[x] / prod)))
    return Separable(ProductDecomposition(gamma, tuple(factors)), tol)


def is_separable(state: StateVector, tol: float = DEFAULT_TOL) -> bool:
    return factor_state(state, tol).separable


def reconstruct(d: ProductDecomposition) -> StateVector:
    if d.n < 1:
        raise ValueError("decomposition has no factors")
    amps = np.array([np.exp(1j * d.global_phase)])
    for k in range(1, d.n + 1):
        amps = np.kron(amps, d.qubit_state(k))
    return StateVector(d.n, amps)


def extract_linear_from_state(
    state: StateVector, tol: float = DEFAULT_TOL
) -> LinearBooleanFunction | None:
    """Recover ``(c, a)`` from ``2**(-n/2) * sum_x (-1)**f(x) |x>`` when ``f`` is affine."""
    verdict = factor_state(state, tol)
    if not verdict.separable:
        return None
    d = verdict.decomposition
    a = 0
    for theta, phi in d.factors:
        if abs(theta - math.pi / 4) > tol:
            return None
        if angular_distance(phi, 0.0) <= tol:
            bit = 0
        elif angular_distance(phi, math.pi) <= tol:
            bit = 1
        else:
            return None
        a = (a << 1) | bit
    if angular_distance(d.global_phase, 0.0) <= tol:
        c = 0
    elif angular_distance(d.global_phase, math.pi) <= tol:
        c = 1
    else:
        return None
    return LinearBooleanFunction(state.n, a, c)


def check_two_qubit_constraint(state: StateVector, tol: float = DEFAULT_TOL) -> tuple[bool, float]:
    """Test ``A*D == B*C`` for amplitudes ``(A, B, C, D)`` of ``|00>, |01>, |10>, |11>``."""
    if state.n != 2:
        raise ValueError(f"two-qubit constraint needs n=2, got n={state.n}")
    a, b, c, d = state.amplitudes.tolist()
    residual = abs(a * d - b * c)
    return residual <= tol, residual
