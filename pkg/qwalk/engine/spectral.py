import cmath
import dataclasses
import math
from typing import NamedTuple, TypeAlias

import numpy as np
import numpy.typing as npt
from loguru import logger

from qwalk.engine import errors
from qwalk.engine.graph import Vertex
from qwalk.engine.hamiltonian import (
    Block,
    BlockReduction,
    FloatArray,
    Hamiltonian,
    lift_eigenpair,
)

ComplexArray: TypeAlias = npt.NDArray[np.complex128]

MAX_SWEEPS = 100
CONVERGENCE = 1e-12
SYMMETRY_TOLERANCE = 1e-12
DEGENERATE_GAP = 1e-12
GAP_RESOLUTION = 1e-12
SEARCH_PHASE_STEP = 0.05
SEARCH_CHUNK = 8192


@dataclasses.dataclass(frozen=True, eq=False)
class Spectrum:
    """
    Eigenvalues in descending order with orthonormal eigenvector columns.

    ``tags`` records which reduced block produced each eigenvalue; it is
    ``None`` for spectra computed without a block reduction.
    """

    eigenvalues: FloatArray
    eigenvectors: FloatArray
    tags: tuple[Block, ...] | None = None

    def __len__(self) -> int:
        return len(self.eigenvalues)

    @property
    def gap(self) -> float:
        if len(self) < 2:
            raise errors.NumericError("A single eigenvalue has no gap.")
        return float(self.eigenvalues[0] - self.eigenvalues[1])

    @property
    def spread(self) -> float:
        return float(self.eigenvalues[0] - self.eigenvalues[-1])

    @property
    def gap_resolved(self) -> bool:
        """Whether λ₁ − λ₂ is large enough to mean something in double precision."""
        return len(self) > 1 and self.gap >= GAP_RESOLUTION * max(
            1.0, abs(float(self.eigenvalues[0]))
        )

    def vector(self, index: int) -> FloatArray:
        return self.eigenvectors[:, index]

    def block_indices(self, which: Block) -> list[int]:
        if self.tags is None:
            raise errors.DomainError("Spectrum carries no π⁺/π⁻ tags.")
        return [index for index, tag in enumerate(self.tags) if tag == which]


class TransferResult(NamedTuple):
    time: float
    probability: float
    amplitude: complex


class AmplitudeSplit(NamedTuple):
    plus: complex
    minus: complex

    @property
    def probability(self) -> float:
        return abs(self.plus - self.minus) ** 2


class SearchResult(NamedTuple):
    time: float
    probability: float
    evaluated: int


def _round_robin(n: int) -> list[tuple[npt.NDArray[np.intp], npt.NDArray[np.intp]]]:
    """Cyclic pair ordering split into rounds of disjoint pairs."""
    players = list(range(n + n % 2))
    rounds = []

    for _ in range(len(players) - 1):
        half = len(players) // 2
        pairs = [
            (min(players[i], players[-1 - i]), max(players[i], players[-1 - i]))
            for i in range(half)
        ]
        pairs = [(p, q) for p, q in pairs if q < n]
        rounds.append(
            (
                np.array([p for p, _ in pairs], dtype=np.intp),
                np.array([q for _, q in pairs], dtype=np.intp),
            )
        )
        players = [players[0], players[-1]] + players[1:-1]

    return rounds


def _off_diagonal(matrix: FloatArray) -> float:
    if len(matrix) < 2:
        return 0.0
    return float(np.abs(matrix - np.diag(np.diag(matrix))).max())


def _normalize_signs(vectors: FloatArray, anchor: Vertex | None = None) -> FloatArray:
    vectors = vectors.copy()

    for column in range(vectors.shape[1]):
        vector = vectors[:, column]

        if anchor is not None and abs(vector[anchor]) > 1e-12:
            pivot = vector[anchor]
        else:
            pivot = vector[int(np.argmax(np.abs(vector)))]

        if pivot < 0:
            vectors[:, column] = -vector

    return vectors


def _rotate_columns(
    matrix: FloatArray,
    p: npt.NDArray[np.intp],
    q: npt.NDArray[np.intp],
    c: FloatArray,
    s: FloatArray,
) -> None:
    """Apply the disjoint (p, q) rotations of one round to the columns, in place."""
    left = matrix[:, p]
    right = matrix[:, q]
    matrix[:, p] = c * left - s * right
    matrix[:, q] = s * left + c * right


def jacobi_eigh(matrix: FloatArray) -> tuple[FloatArray, FloatArray]:
    """
    Cyclic Jacobi eigenvalue iteration.

    Each sweep visits every off-diagonal pair once; the pairs are grouped into
    rounds of disjoint rotations that are applied together.
    """
    a = np.array(matrix, dtype=np.float64)
    n = len(a)
    vectors = np.eye(n)
    scale = float(np.linalg.norm(a))

    if n < 2 or scale == 0.0:
        return np.diag(a).copy(), vectors

    threshold = CONVERGENCE * scale
    rounds = _round_robin(n)

    for sweep in range(MAX_SWEEPS):
        off = _off_diagonal(a)

        if off < threshold:
            logger.debug("Jacobi converged on {n}x{n} after {sweeps} sweeps.", n=n, sweeps=sweep)
            return np.diag(a).copy(), vectors

        for p, q in rounds:
            apq = a[p, q]
            active = np.abs(apq) > np.finfo(np.float64).tiny

            if not active.any():
                continue

            p, q, apq = p[active], q[active], apq[active]
            theta = (a[q, q] - a[p, p]) / (2.0 * apq)
            sign = np.where(theta >= 0, 1.0, -1.0)
            t = sign / (np.abs(theta) + np.hypot(theta, 1.0))
            c = 1.0 / np.sqrt(t * t + 1.0)
            s = t * c

            _rotate_columns(a, p, q, c, s)
            _rotate_columns(a.T, p, q, c, s)
            a[p, q] = a[q, p] = 0.0
            _rotate_columns(vectors, p, q, c, s)

        a = 0.5 * (a + a.T)

    raise errors.NumericError(
        f"Jacobi iteration did not converge after {MAX_SWEEPS} sweeps, "
        f"max off-diagonal {_off_diagonal(a):.3e}."
    )


def eig_symmetric(matrix: FloatArray) -> Spectrum:
    matrix = np.asarray(matrix, dtype=np.float64)

    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise errors.StructuralError(f"Expected a square matrix, got shape {matrix.shape}.")

    asymmetry = float(np.abs(matrix - matrix.T).max()) if matrix.size else 0.0

    if asymmetry > SYMMETRY_TOLERANCE:
        raise errors.DomainError(f"Matrix is not symmetric (max |M - Mᵀ| = {asymmetry:.3e}).")

    values, vectors = jacobi_eigh(matrix)
    order = np.argsort(-values, kind="stable")
    return Spectrum(eigenvalues=values[order], eigenvectors=_normalize_signs(vectors[:, order]))


def hamiltonian_spectrum(h: Hamiltonian, reduction: BlockReduction | None = None) -> Spectrum:
    """
    Spectrum of H, either directly or assembled from the reduced blocks.

    With a reduction the eigenvalues keep the tag of the block they came from
    and eigenvectors are sign-normalized to be nonnegative at the well.
    """
    if reduction is None:
        return eig_symmetric(h.matrix)

    values: list[float] = []
    columns: list[FloatArray] = []
    tags: list[Block] = []

    for which in (Block.PLUS, Block.MINUS):
        block = eig_symmetric(reduction.block(which))

        for index, value in enumerate(block.eigenvalues):
            values.append(float(value))
            columns.append(lift_eigenpair(reduction, which, block.vector(index)))
            tags.append(which)

    eigenvalues = np.asarray(values)
    order = np.argsort(-eigenvalues, kind="stable")
    eigenvectors = np.column_stack([columns[i] for i in order])
    return Spectrum(
        eigenvalues=eigenvalues[order],
        eigenvectors=_normalize_signs(eigenvectors, anchor=reduction.partition.well),
        tags=tuple(tags[i] for i in order),
    )


def _phases(spec: Spectrum, t: float) -> ComplexArray:
    # Relative to λ₁ so that large t does not drown the gap in rounding.
    shifted = spec.eigenvalues - spec.eigenvalues[0]
    return np.exp(1j * t * shifted)


def transfer_probability(spec: Spectrum, u: Vertex, v: Vertex, t: float) -> TransferResult:
    if t < 0:
        raise errors.DomainError(f"Time must be nonnegative, got {t}.")

    weights = spec.eigenvectors[u, :] * spec.eigenvectors[v, :]
    inner = complex(np.sum(weights * _phases(spec, t)))
    amplitude = cmath.exp(1j * t * float(spec.eigenvalues[0])) * inner
    return TransferResult(time=t, probability=abs(inner) ** 2, amplitude=amplitude)


def evolve(spec: Spectrum, u: Vertex, t: float) -> ComplexArray:
    """State ψ(t) = e^{itH} e_u, up to a global phase."""
    coefficients = spec.eigenvectors[u, :] * _phases(spec, t)
    result: ComplexArray = spec.eigenvectors @ coefficients
    return result


def amplitude_split(spec: Spectrum, u: Vertex, t: float) -> AmplitudeSplit:
    if spec.tags is None:
        raise errors.DomainError("Amplitude split needs a spectrum tagged with π⁺/π⁻.")

    terms = spec.eigenvectors[u, :] ** 2 * _phases(spec, t)
    phase = cmath.exp(1j * t * float(spec.eigenvalues[0]))
    plus = np.array([tag == Block.PLUS for tag in spec.tags])
    return AmplitudeSplit(
        plus=phase * complex(terms[plus].sum()),
        minus=phase * complex(terms[~plus].sum()),
    )


def optimal_time(spec: Spectrum) -> float:
    if len(spec) < 2 or spec.gap <= DEGENERATE_GAP:
        raise errors.NumericError("The two largest eigenvalues are degenerate.")
    return math.pi / spec.gap


def default_search_grid(spec: Spectrum) -> tuple[float, float]:
    """Horizon 2π/(λ₁−λ₂) and step 0.05/(λ₁−λₙ)."""
    if len(spec) < 2 or spec.spread <= DEGENERATE_GAP:
        raise errors.DomainError("A search grid needs at least two distinct eigenvalues.")

    horizon = 2 * optimal_time(spec)
    step = SEARCH_PHASE_STEP / spec.spread
    return horizon, step


def fidelity_search(
    spec: Spectrum,
    u: Vertex,
    v: Vertex,
    horizon: float | None = None,
    step: float | None = None,
) -> SearchResult:
    """
    Maximize p(t) over the grid {0, step, ..., horizon}.

    The maximum is a lower bound on the fidelity; ties go to the earlier time.
    """
    if horizon is None or step is None:
        default_horizon, default_step = default_search_grid(spec)
        horizon = default_horizon if horizon is None else horizon
        step = default_step if step is None else step

    if horizon <= 0 or step <= 0:
        raise errors.DomainError("Horizon and step must be positive.")

    if step > horizon:
        raise errors.DomainError(f"Step {step} exceeds horizon {horizon}.")

    count = int(math.floor(horizon / step + 1e-9)) + 1
    weights = (spec.eigenvectors[u, :] * spec.eigenvectors[v, :]).astype(np.complex128)
    shifted = spec.eigenvalues - spec.eigenvalues[0]
    best_index, best_probability = 0, -1.0

    for start in range(0, count, SEARCH_CHUNK):
        times = step * np.arange(start, min(start + SEARCH_CHUNK, count))
        probabilities = np.abs(np.exp(1j * np.outer(times, shifted)) @ weights) ** 2
        index = int(np.argmax(probabilities))

        if probabilities[index] > best_probability:
            best_index, best_probability = start + index, float(probabilities[index])

    return SearchResult(time=best_index * step, probability=best_probability, evaluated=count)


def strongly_cospectral(spec: Spectrum, u: Vertex, w: Vertex, tolerance: float = 1e-9) -> bool:
    """Whether E·e_u = ±E·e_w for the projection E onto every eigenspace."""
    values = spec.eigenvalues
    start = 0

    while start < len(values):
        stop = start + 1

        while stop < len(values) and values[stop - 1] - values[stop] <= 1e-8:
            stop += 1

        basis = spec.eigenvectors[:, start:stop]
        project_u = basis @ basis[u, :]
        project_w = basis @ basis[w, :]

        if not (
            np.allclose(project_u, project_w, atol=tolerance)
            or np.allclose(project_u, -project_w, atol=tolerance)
        ):
            return False

        start = stop

    return True
