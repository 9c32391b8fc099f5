"""Standard quantum description of the N-path interferometer.

The particle inside the interferometer is a density matrix; the second
transformation is unitary.  A detector ("bomb") in one path acts as a
projective path measurement, and the pipeline here computes the trigger,
inconclusive and success probabilities of a single-shot interaction-free
measurement together with the quantum trade-off lower bound.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .results import IFMResult
from .tensor import DEFAULT_TOL

#: Threshold above which an output-port probability of the no-bomb run
#: counts as part of the inconclusive support set.  Deliberately distinct
#: from the entrywise tolerance: it must absorb floating-point leakage of
#: tuned (destructive-interference) interferometers.
SUPPORT_TOL = 1e-9


def _as_square(entries: object, what: str) -> np.ndarray:
    arr = np.asarray(entries, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"{what} must be a square matrix, got shape {arr.shape}")
    return arr


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """N x N density matrix: Hermitian, unit trace, positive semidefinite."""

    n_paths: int
    entries: np.ndarray
    tol: float = field(default=DEFAULT_TOL, repr=False)

    def __post_init__(self) -> None:
        arr = _as_square(self.entries, "density matrix")
        if self.n_paths < 2 or arr.shape[0] != self.n_paths:
            raise ValueError(
                f"entries shape {arr.shape} does not match n_paths={self.n_paths}"
            )
        if np.abs(arr - arr.conj().T).max() > self.tol:
            raise ValueError("density matrix is not Hermitian within tolerance")
        trace = complex(np.trace(arr))
        if abs(trace - 1.0) > self.tol:
            raise ValueError(f"density matrix trace is {trace}, expected 1")
        lowest = float(np.linalg.eigvalsh(arr).min())
        if lowest < -self.tol:
            raise ValueError(f"density matrix has negative eigenvalue {lowest:.3e}")
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    @classmethod
    def from_state_vector(cls, amplitudes: object, tol: float = DEFAULT_TOL) -> "DensityMatrix":
        """Rank-1 density matrix of a pure state; the vector is normalized."""
        vec = np.asarray(amplitudes, dtype=complex).reshape(-1)
        norm = float(np.linalg.norm(vec))
        if norm == 0.0:
            raise ValueError("cannot normalize the zero vector")
        vec = vec / norm
        return cls(vec.size, np.outer(vec, vec.conj()), tol=tol)

    @classmethod
    def path_state(cls, n_paths: int, path: int) -> "DensityMatrix":
        """Particle definitely in the given 1-based path."""
        vec = np.zeros(n_paths)
        vec[path - 1] = 1.0
        return cls.from_state_vector(vec)

    @classmethod
    def maximally_mixed(cls, n_paths: int) -> "DensityMatrix":
        return cls(n_paths, np.eye(n_paths, dtype=complex) / n_paths)

    def probability(self, path: int) -> float:
        """Population of the 1-based path."""
        if not 1 <= path <= self.n_paths:
            raise ValueError(f"path {path} out of range 1..{self.n_paths}")
        return float(self.entries[path - 1, path - 1].real)

    def purity(self) -> float:
        return float(np.trace(self.entries @ self.entries).real)


@dataclass(frozen=True, eq=False)
class UnitaryMatrix:
    """N x N interferometer transformation with U U+ = 1."""

    n_paths: int
    entries: np.ndarray
    tol: float = field(default=DEFAULT_TOL, repr=False)

    def __post_init__(self) -> None:
        arr = _as_square(self.entries, "unitary")
        if self.n_paths < 2 or arr.shape[0] != self.n_paths:
            raise ValueError(
                f"entries shape {arr.shape} does not match n_paths={self.n_paths}"
            )
        residual = np.abs(arr @ arr.conj().T - np.eye(self.n_paths)).max()
        if residual > self.tol:
            raise ValueError(f"matrix is not unitary: residual {residual:.3e}")
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)


def fourier_unitary(n: int) -> UnitaryMatrix:
    """Discrete Fourier transform on n paths, entries ``w^(jk) / sqrt(n)``
    with ``w = exp(i 2 pi / n)`` and 0-based exponents."""
    if n < 2:
        raise ValueError(f"need at least 2 paths, got {n}")
    j, k = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    return UnitaryMatrix(n, np.exp(2j * np.pi * j * k / n) / np.sqrt(n))


def inject_first_path(u1: UnitaryMatrix) -> DensityMatrix:
    """State inside the interferometer after the first transformation acts
    on a particle entering through path 1."""
    return DensityMatrix.from_state_vector(u1.entries[:, 0])


def luders_remove_path(
    rho: DensityMatrix, path: int, tol: float = DEFAULT_TOL
) -> tuple[float, DensityMatrix]:
    """Projective update after the particle was *not* found in ``path``.

    Returns ``(p_trigger, rho_tilde)`` where ``p_trigger`` is the
    population of the measured path and ``rho_tilde`` the renormalized
    state with that path projected out.  Raises when the particle is
    certainly in the path, because the post-measurement state is then
    undefined.
    """
    if not 1 <= path <= rho.n_paths:
        raise ValueError(f"path {path} out of range 1..{rho.n_paths}")
    p_trigger = rho.probability(path)
    if p_trigger >= 1.0 - tol:
        raise ValueError(
            "certain detonation: the particle is in the measured path and the "
            "post-measurement state is undefined"
        )
    keep = np.eye(rho.n_paths, dtype=complex)
    keep[path - 1, path - 1] = 0.0
    projected = keep @ rho.entries @ keep
    return p_trigger, DensityMatrix(rho.n_paths, projected / (1.0 - p_trigger), tol=tol)


def support_projector(rho: DensityMatrix, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Orthogonal projector onto the eigenvectors of rho with eigenvalue > tol."""
    eigenvalues, eigenvectors = np.linalg.eigh(rho.entries)
    keep = eigenvectors[:, eigenvalues > tol]
    return keep @ keep.conj().T


def quantum_tradeoff_bounds(
    rho: DensityMatrix, bomb_path: int, tol: float = DEFAULT_TOL
) -> tuple[float, float]:
    """Lower bounds on the inconclusive probability for a given inside state.

    Returns ``(bound_support, bound_pure)`` with

    * ``bound_support = 1 - 2 P + P <b| E(rho) |b>`` where ``E`` projects
      onto the support of rho and ``P`` is the bomb-path population, and
    * ``bound_pure = (1 - P)^2``, the weaker convexity consequence that is
      tight for pure states.
    """
    if not 1 <= bomb_path <= rho.n_paths:
        raise ValueError(f"bomb_path {bomb_path} out of range 1..{rho.n_paths}")
    p = rho.probability(bomb_path)
    projector = support_projector(rho, tol=tol)
    overlap = float(projector[bomb_path - 1, bomb_path - 1].real)
    bound_support = 1.0 - 2.0 * p + p * overlap
    bound_pure = (1.0 - p) ** 2
    return bound_support, bound_pure


def quantum_ifm(
    rho_inside: DensityMatrix,
    u2: UnitaryMatrix,
    bomb_path: int,
    *,
    support_tol: float = SUPPORT_TOL,
    tol: float = DEFAULT_TOL,
    label: str = "",
) -> IFMResult:
    """Single-shot interaction-free measurement with the bomb in ``bomb_path``.

    ``rho_inside`` describes the particle inside the interferometer, right
    after the first transformation.  The inconclusive support set consists
    of the output ports where the particle could emerge with no bomb
    present, i.e. ports whose no-bomb probability exceeds ``support_tol``.
    The result is flagged ``support_sensitive`` when any nonzero no-bomb
    port probability falls within ``10 * support_tol`` of zero, since the
    support set could then depend on the threshold choice.
    """
    if rho_inside.n_paths != u2.n_paths:
        raise ValueError(
            f"dimension mismatch: state has {rho_inside.n_paths} paths, "
            f"unitary has {u2.n_paths}"
        )
    p_trigger, rho_tilde = luders_remove_path(rho_inside, bomb_path, tol=tol)

    u = u2.entries
    no_bomb_probs = np.einsum(
        "sj,jk,sk->s", u, rho_inside.entries, u.conj()
    ).real
    support = no_bomb_probs > support_tol
    sensitive = bool(np.any((no_bomb_probs > 0) & (no_bomb_probs < 10 * support_tol)))

    with_bomb_probs = np.einsum("sj,jk,sk->s", u, rho_tilde.entries, u.conj()).real
    p_inconclusive = float((1.0 - p_trigger) * with_bomb_probs[support].sum())
    p_success = 1.0 - p_trigger - p_inconclusive

    bound_support, _ = quantum_tradeoff_bounds(rho_inside, bomb_path, tol=tol)
    return IFMResult(
        model="quantum",
        n_paths=rho_inside.n_paths,
        p_trigger=p_trigger,
        p_inconclusive=p_inconclusive,
        p_success=p_success,
        bound_value=bound_support,
        label=label,
        support_sensitive=sensitive,
    )


# ---------------------------------------------------------------------------
# Random sampling for the property suites.  Pure states are normalized
# complex Gaussian vectors; mixed states are normalized Wishart products.

def random_pure_state(n_paths: int, rng: np.random.Generator) -> DensityMatrix:
    vec = rng.standard_normal(n_paths) + 1j * rng.standard_normal(n_paths)
    return DensityMatrix.from_state_vector(vec)


def random_density_matrix(
    n_paths: int, rng: np.random.Generator, rank: int | None = None
) -> DensityMatrix:
    rank = n_paths if rank is None else rank
    g = rng.standard_normal((n_paths, rank)) + 1j * rng.standard_normal((n_paths, rank))
    w = g @ g.conj().T
    return DensityMatrix(n_paths, w / np.trace(w).real)


def random_unitary(n_paths: int, rng: np.random.Generator) -> UnitaryMatrix:
    z = rng.standard_normal((n_paths, n_paths)) + 1j * rng.standard_normal(
        (n_paths, n_paths)
    )
    q, r = np.linalg.qr(z)
    phases = np.diag(r) / np.abs(np.diag(r))
    return UnitaryMatrix(n_paths, q * phases.conj())


# ---------------------------------------------------------------------------
# Serialization: row-major arrays of [re, im] pairs.

def matrix_to_json_dict(matrix: DensityMatrix | UnitaryMatrix) -> dict:
    entries = [
        [[value.real, value.imag] for value in row] for row in matrix.entries
    ]
    return {"n_paths": matrix.n_paths, "entries": entries}


def _entries_from_json(data: Mapping) -> tuple[int, np.ndarray]:
    n_paths = int(data["n_paths"])
    arr = np.array(
        [[complex(re, im) for re, im in row] for row in data["entries"]],
        dtype=complex,
    )
    return n_paths, arr


def density_matrix_from_json_dict(data: Mapping, tol: float = DEFAULT_TOL) -> DensityMatrix:
    n_paths, arr = _entries_from_json(data)
    return DensityMatrix(n_paths, arr, tol=tol)


def unitary_from_json_dict(data: Mapping, tol: float = DEFAULT_TOL) -> UnitaryMatrix:
    n_paths, arr = _entries_from_json(data)
    return UnitaryMatrix(n_paths, arr, tol=tol)
