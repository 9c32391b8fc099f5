"""Involutive interferometer transformations for the cube model.

Cubes without two-path coherence form a subspace of dimension
``d = N + (N-1)(N-2)`` spanned by the N diagonal path cubes, the
independent three-path coherence cubes and their conjugates.  A cube
multiport is a d x d matrix acting on coordinate vectors in that
sub-basis; the ones built here are self-adjoint involutions that map each
path cube onto a pure cube with *no* population in that path, the key
ingredient of a perfect interaction-free measurement.

The construction stacks phase rows taken from the discrete Fourier
transform into a rectangular phase matrix, fixes the diagonal and
coherence blocks from the required images of the path cubes, and closes
the transformation with a principal Hermitian matrix square root.

On root-of-unity conventions: :func:`build_phase_matrix` uses
``exp(+i 2 pi / N)`` while the optimal cubes (and hence the assembled
transformations) carry the conjugated phases, consistent with
:func:`cubesim.cubes.nonquantum_cube` and its ``exp(-i 2 pi / N)``.
Both choices solve the same orthonormality equations; the conjugated one
matches the tabulated four-path cube family entry for entry.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .tensor import DEFAULT_TOL, HermitianCube, hermitian_complete

#: Frobenius-norm tolerance for assembled-matrix identities; looser than
#: the entrywise default because eigendecomposition error accumulates with
#: the subspace dimension (d is about 100 at N = 12).
MATRIX_TOL = 1e-9

_SQRT3 = np.sqrt(3.0)


def coherence_pairs(n_paths: int) -> list[tuple[int, int]]:
    """Ordered pairs (v, w) with 1 < v < w <= N, lexicographic."""
    return [
        (v, w)
        for v in range(2, n_paths + 1)
        for w in range(v + 1, n_paths + 1)
    ]


def fourier_row_exponents(n_paths: int) -> list[int]:
    """Fourier row index q assigned to each stacked phase-matrix row.

    Even N stacks (N-2)/2 copies of the rows q = 1..N-1; odd N stacks
    N-2 copies of the rows q = 1..(N-1)/2.  Row r of the phase matrix
    carries phases ``w^(q_r * (n-1))`` across the columns n = 1..N.
    """
    if n_paths < 3:
        raise ValueError(f"need at least 3 paths, got {n_paths}")
    if n_paths % 2 == 0:
        block = list(range(1, n_paths))
        copies = (n_paths - 2) // 2
    else:
        block = list(range(1, (n_paths - 1) // 2 + 1))
        copies = n_paths - 2
    return block * copies


@dataclass(frozen=True, eq=False)
class PhaseMatrix:
    """Unimodular phase vectors of the optimal cubes, one column per cube.

    Column n holds the independent three-path phases of cube n, indexed
    by the coherence pairs in lexicographic order.  Distinct columns obey
    the fixed-overlap condition ``2 Re(x_m . x_n) = 2 - N`` that encodes
    orthogonality of the cubes.
    """

    n_paths: int
    matrix: np.ndarray
    tol: float = field(default=DEFAULT_TOL, repr=False)

    def __post_init__(self) -> None:
        arr = np.asarray(self.matrix, dtype=complex)
        n = self.n_paths
        rows = (n - 1) * (n - 2) // 2
        if arr.shape != (rows, n):
            raise ValueError(
                f"phase matrix for N={n} must have shape {(rows, n)}, got {arr.shape}"
            )
        if np.abs(np.abs(arr) - 1.0).max() > self.tol:
            raise ValueError("phase matrix entries must have unit modulus")
        gram = 2.0 * np.real(arr.conj().T @ arr)
        off = gram - np.diag(np.diag(gram))
        target = (2.0 - n) * (np.ones((n, n)) - np.eye(n))
        if np.abs(off - target).max() > MATRIX_TOL:
            raise ValueError(
                "phase-vector overlaps do not satisfy the fixed-overlap condition"
            )
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "matrix", arr)

    @property
    def pairs(self) -> list[tuple[int, int]]:
        return coherence_pairs(self.n_paths)


def build_phase_matrix(n_paths: int) -> PhaseMatrix:
    """Stacked Fourier phase matrix with ``w = exp(+i 2 pi / N)``."""
    exponents = np.asarray(fourier_row_exponents(n_paths))
    columns = np.arange(n_paths)
    angles = 2.0 * np.pi * np.outer(exponents, columns) / n_paths
    return PhaseMatrix(n_paths, np.exp(1j * angles))


@dataclass(frozen=True, eq=False)
class SubBasis:
    """Ordered basis of the no-two-path-coherence subspace.

    The ordering is fixed and used everywhere a coordinate vector or an
    assembled matrix is serialized: first the N diagonal path cubes, then
    the coherence cubes for the pairs (v, w) in lexicographic order, then
    their conjugates in the same pair order.  The basis tensors are
    orthonormal under the cube inner product (conjugation on the first
    argument); note the coherence tensors are not individually Hermitian,
    so a coordinate vector represents a Hermitian cube only when its
    diagonal part is real and conjugate-paired coordinates are conjugate.
    """

    n_paths: int
    cubes: np.ndarray  # shape (d, N, N, N)
    labels: tuple[str, ...]

    @property
    def dim(self) -> int:
        return self.cubes.shape[0]

    @property
    def n_pairs(self) -> int:
        return (self.n_paths - 1) * (self.n_paths - 2) // 2

    def conjugate_partner(self, index: int) -> int:
        """Involutive index map pairing each coherence cube with its conjugate."""
        n, p = self.n_paths, self.n_pairs
        if index < n:
            return index
        if index < n + p:
            return index + p
        return index - p

    def hermitian_coord_violation(self, coords: np.ndarray) -> float:
        """Largest deviation of a coordinate vector from representing a
        Hermitian cube (real diagonal part, conjugate-paired coherences)."""
        coords = np.asarray(coords, dtype=complex)
        n, p = self.n_paths, self.n_pairs
        worst = float(np.abs(coords[:n].imag).max()) if n else 0.0
        if p:
            mismatch = coords[n : n + p] - np.conj(coords[n + p :])
            worst = max(worst, float(np.abs(mismatch).max()))
        return worst

    def diagonal_sum(self, coords: np.ndarray) -> float:
        return float(np.asarray(coords)[: self.n_paths].real.sum())


def sub_basis(n_paths: int) -> SubBasis:
    """Basis cubes of the multiport subspace for an N-path interferometer."""
    if n_paths < 3:
        raise ValueError(f"need at least 3 paths, got {n_paths}")
    n = n_paths
    cubes: list[np.ndarray] = []
    labels: list[str] = []
    for path in range(1, n + 1):
        b = np.zeros((n, n, n), dtype=complex)
        b[path - 1, path - 1, path - 1] = 1.0
        cubes.append(b)
        labels.append(f"path_{path}")
    for flipped in (False, True):
        for v, w in coherence_pairs(n):
            first, second = (w, v) if flipped else (v, w)
            b = np.zeros((n, n, n), dtype=complex)
            # cyclic images of (1, first, second) carry the 1/sqrt(3) weight
            triple = (0, first - 1, second - 1)
            for shift in range(3):
                pos = (triple[shift], triple[(shift + 1) % 3], triple[(shift + 2) % 3])
                b[pos] = 1.0 / _SQRT3
            cubes.append(b)
            labels.append(f"coherence_{first}_{second}")
    return SubBasis(n_paths, np.stack(cubes), tuple(labels))


def _entries_to_coords(entries: np.ndarray, basis: SubBasis, tol: float) -> np.ndarray:
    n = basis.n_paths
    j, k, l = np.meshgrid(*(np.arange(n),) * 3, indexing="ij")
    two_equal = ((j == k).astype(int) + (k == l) + (j == l)) == 1
    worst = float(np.abs(entries[two_equal]).max()) if two_equal.any() else 0.0
    if worst > tol:
        raise ValueError(
            f"cube has two-path coherence up to {worst:.3e} and lies outside "
            "the multiport domain; dephase first"
        )
    coords = np.einsum("djkl,jkl->d", basis.cubes.conj(), entries)
    residual = np.einsum("d,djkl->jkl", coords, basis.cubes) - entries
    gap = float(np.abs(residual).max())
    if gap > tol:
        raise ValueError(
            f"cube lies outside the multiport subspace (projection residual "
            f"{gap:.3e}); only three-path coherences involving path 1 are supported"
        )
    return coords


def to_coords(cube: HermitianCube, basis: SubBasis, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Coordinate vector of a cube in the sub-basis ordering.

    The cube must have no two-path coherence (apply the dephasing map
    first if it does) and no three-path coherence missing path 1; both
    conditions are checked and violations raise.
    """
    if cube.n_paths != basis.n_paths:
        raise ValueError(
            f"path-count mismatch: cube has {cube.n_paths}, basis has {basis.n_paths}"
        )
    return _entries_to_coords(cube.entries, basis, tol)


def from_coords(
    coords: np.ndarray,
    basis: SubBasis,
    *,
    is_state: bool = False,
    tol: float = DEFAULT_TOL,
) -> HermitianCube:
    """Cube with the given sub-basis coordinates.

    Raises when the coordinates violate the Hermiticity pairing
    constraint, since the resulting tensor would not be a valid cube.
    """
    coords = np.asarray(coords, dtype=complex)
    if coords.shape != (basis.dim,):
        raise ValueError(f"expected {basis.dim} coordinates, got shape {coords.shape}")
    entries = np.einsum("d,djkl->jkl", coords, basis.cubes)
    return HermitianCube(basis.n_paths, entries, is_state=is_state, tol=tol)


def optimal_cubes(n_paths: int, tol: float = DEFAULT_TOL) -> list[HermitianCube]:
    """The N mutually orthogonal pure cubes targeted by the multiport.

    Cube n has population 1/(N-1) in every path except path n, no two-path
    coherence, and unimodular three-path phases taken from the conjugate
    of :func:`build_phase_matrix` (see the module docstring on
    conventions).  Each is a pure state cube and the family is
    orthonormal.
    """
    phases = np.conj(build_phase_matrix(n_paths).matrix)
    pairs = coherence_pairs(n_paths)
    cubes = []
    for n in range(1, n_paths + 1):
        canonical: dict[tuple[int, int, int], complex] = {
            (j, j, j): 1.0 / (n_paths - 1) for j in range(1, n_paths + 1) if j != n
        }
        for row, (v, w) in enumerate(pairs):
            canonical[(1, v, w)] = phases[row, n - 1] / (_SQRT3 * (n_paths - 1))
        cubes.append(hermitian_complete(canonical, n_paths, is_state=True, tol=tol))
    return cubes


def hermitian_sqrt(matrix: np.ndarray, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Principal square root of a Hermitian positive-semidefinite matrix.

    Eigenvalues in [-tol, 0) are clamped to zero; anything below -tol
    raises.  The result is Hermitian PSD and squares back to the input up
    to eigendecomposition error.
    """
    arr = np.asarray(matrix, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {arr.shape}")
    if np.abs(arr - arr.conj().T).max() > tol:
        raise ValueError("matrix is not Hermitian within tolerance")
    eigenvalues, eigenvectors = np.linalg.eigh(arr)
    if eigenvalues.min() < -tol:
        raise ValueError(
            f"matrix is not positive semidefinite: eigenvalue {eigenvalues.min():.3e}"
        )
    root = np.sqrt(np.clip(eigenvalues, 0.0, None))
    return (eigenvectors * root) @ eigenvectors.conj().T


@dataclass(frozen=True, eq=False)
class MultiportMatrix:
    """A d x d transformation in sub-basis coordinates, stored with its basis.

    Block layout (in the fixed basis ordering): the N x N block A maps
    populations to populations, B maps populations to coherences, the
    top-right block is B's adjoint and D closes the coherence sector.
    Construction-time validation covers shapes only, so that deliberately
    corrupted matrices can still be inspected with
    :func:`verify_multiport`.
    """

    n_paths: int
    matrix: np.ndarray
    basis: SubBasis

    def __post_init__(self) -> None:
        arr = np.asarray(self.matrix, dtype=complex)
        d = self.basis.dim
        if self.n_paths != self.basis.n_paths:
            raise ValueError("matrix and basis disagree on the path count")
        if arr.shape != (d, d):
            raise ValueError(f"expected a {d} x {d} matrix, got shape {arr.shape}")
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "matrix", arr)

    @property
    def block_a(self) -> np.ndarray:
        n = self.n_paths
        return self.matrix[:n, :n]

    @property
    def block_b(self) -> np.ndarray:
        n = self.n_paths
        return self.matrix[n:, :n]

    @property
    def block_c(self) -> np.ndarray:
        n = self.n_paths
        return self.matrix[:n, n:]

    @property
    def block_d(self) -> np.ndarray:
        n = self.n_paths
        return self.matrix[n:, n:]

    def to_json_dict(self) -> dict:
        return {
            "n_paths": self.n_paths,
            "basis_order": list(self.basis.labels),
            "matrix": [
                [[value.real, value.imag] for value in row] for row in self.matrix
            ],
        }


def t3_matrix() -> MultiportMatrix:
    """The explicit three-path multiport, written out entry by entry.

    In the five-dimensional sub-basis it reads ``(1/2) [[0,1,1,1,1],
    [1,0,1,w*,w], [1,1,0,w,w*], [1,w,w*,1,0], [1,w*,w,0,1]]`` with
    ``w = exp(-i 2 pi / 3)``; a self-adjoint involution that exchanges the
    path-1 cube with the pure three-path-coherent cube.
    """
    w = np.exp(-2j * np.pi / 3)
    wc = np.conj(w)
    matrix = 0.5 * np.array(
        [
            [0, 1, 1, 1, 1],
            [1, 0, 1, wc, w],
            [1, 1, 0, w, wc],
            [1, w, wc, 1, 0],
            [1, wc, w, 0, 1],
        ],
        dtype=complex,
    )
    return MultiportMatrix(3, matrix, sub_basis(3))


def assemble_multiport(n_paths: int, tol: float = MATRIX_TOL) -> MultiportMatrix:
    """Build the N-path cube multiport mapping path cube n to optimal cube n.

    The population block is ``(ones - id) / (N - 1)``; the coherence rows
    are the three-path coordinates of the optimal cubes; the top-right
    block is their adjoint; and the closing block is the principal root
    ``sqrt(1 - B B+)``.  Self-adjointness and the involution property are
    verified at ``tol`` before returning.
    """
    basis = sub_basis(n_paths)
    n, d = n_paths, basis.dim

    matrix = np.zeros((d, d), dtype=complex)
    a = (np.ones((n, n)) - np.eye(n)) / (n - 1)
    # column n of the coherence block holds the three-path coordinates of
    # optimal cube n: the conjugated phase rows, then their conjugates
    phases = np.conj(build_phase_matrix(n_paths).matrix)
    b = np.vstack([phases, np.conj(phases)]) / (n - 1)
    matrix[:n, :n] = a
    matrix[n:, :n] = b
    matrix[:n, n:] = b.conj().T
    matrix[n:, n:] = hermitian_sqrt(np.eye(d - n) - b @ b.conj().T)

    result = MultiportMatrix(n_paths, matrix, basis)
    report = verify_multiport(result, tol)
    if report.involution_residual > tol or report.adjoint_residual > tol:
        raise ValueError(
            f"assembled multiport for N={n_paths} fails its defining identities "
            f"(involution residual {report.involution_residual:.3e}); the "
            "principal square-root sign choice did not close the construction"
        )
    return result


def apply_transform(
    t: MultiportMatrix, cube: HermitianCube, tol: float = DEFAULT_TOL
) -> HermitianCube:
    """Act on a cube by matrix multiplication on its coordinate vector."""
    coords = to_coords(cube, t.basis, tol=tol)
    return from_coords(t.matrix @ coords, t.basis, is_state=cube.is_state, tol=tol)


@dataclass(frozen=True)
class MultiportReport:
    """Residuals of the defining multiport identities (all should be tiny).

    ``d_spectrum_deviation`` measures how far the closing block's
    eigenvalues stray from the two admissible values {1, 1/(N-1)};
    ``bb_spectrum_deviation`` does the same for the coherence Gram block
    against {0, N(N-2)/(N-1)^2}.
    """

    n_paths: int
    adjoint_residual: float
    involution_residual: float
    pairing_violation: float
    diagonal_sum_drift: float
    d_spectrum_deviation: float
    bb_spectrum_deviation: float

    def worst(self) -> float:
        return max(
            self.adjoint_residual,
            self.involution_residual,
            self.pairing_violation,
            self.diagonal_sum_drift,
            self.d_spectrum_deviation,
            self.bb_spectrum_deviation,
        )

    def passes(self, tol: float = MATRIX_TOL) -> bool:
        return self.worst() <= tol


def _hermitian_coordinate_basis(basis: SubBasis) -> np.ndarray:
    """Real-space basis of Hermitian-constrained coordinate vectors."""
    n, p, d = basis.n_paths, basis.n_pairs, basis.dim
    vectors = []
    for i in range(n):
        e = np.zeros(d, dtype=complex)
        e[i] = 1.0
        vectors.append(e)
    for i in range(p):
        plus = np.zeros(d, dtype=complex)
        plus[n + i] = plus[n + p + i] = 1.0 / np.sqrt(2.0)
        vectors.append(plus)
        cross = np.zeros(d, dtype=complex)
        cross[n + i] = 1j / np.sqrt(2.0)
        cross[n + p + i] = -1j / np.sqrt(2.0)
        vectors.append(cross)
    return np.stack(vectors)


def verify_multiport(t: MultiportMatrix, tol: float = MATRIX_TOL) -> MultiportReport:
    """Measure how well a multiport satisfies its contract; never raises.

    Checks self-adjointness and the involution property (Frobenius norm),
    preservation of the Hermiticity pairing constraint and of the total
    population over a spanning set of Hermitian coordinate vectors, and
    membership of the closing-block and coherence-Gram spectra in their
    admissible two-point sets.
    """
    m = t.matrix
    d = t.basis.dim
    adjoint = float(np.linalg.norm(m - m.conj().T))
    involution = float(np.linalg.norm(m @ m - np.eye(d)))

    pairing = 0.0
    drift = 0.0
    for vec in _hermitian_coordinate_basis(t.basis):
        image = m @ vec
        pairing = max(pairing, t.basis.hermitian_coord_violation(image))
        drift = max(
            drift, abs(t.basis.diagonal_sum(image) - t.basis.diagonal_sum(vec))
        )

    n = t.n_paths
    inverse_weight = 1.0 / (n - 1)
    d_eigs = np.linalg.eigvalsh(t.block_d)
    d_dev = float(
        np.minimum(np.abs(d_eigs - 1.0), np.abs(d_eigs - inverse_weight)).max()
    )
    bb = t.block_b @ t.block_b.conj().T
    bb_eigs = np.linalg.eigvalsh(bb)
    bb_target = n * (n - 2) / (n - 1) ** 2
    bb_dev = float(np.minimum(np.abs(bb_eigs), np.abs(bb_eigs - bb_target)).max())

    return MultiportReport(
        n_paths=n,
        adjoint_residual=adjoint,
        involution_residual=involution,
        pairing_violation=pairing,
        diagonal_sum_drift=drift,
        d_spectrum_deviation=d_dev,
        bb_spectrum_deviation=bb_dev,
    )


# ---------------------------------------------------------------------------
# Tabulated four-path reference data.  The optimal four-path cubes are kept
# here as literal primary entries (diagonal populations plus the independent
# three-path coherences); the full tensors follow by Hermitian completion.
# They provide a construction-independent cross-check of optimal_cubes(4)
# and of the assembled transformation.

_N4_UNIT = 1.0 / (3.0 * _SQRT3)

#: Independent three-path phases of the four optimal cubes, one row per
#: coherence pair (2,3), (2,4), (3,4), one column per cube.
_N4_PHASES = np.array(
    [
        [1, -1j, -1, 1j],
        [1, -1, 1, -1],
        [1, 1j, -1, -1j],
    ],
    dtype=complex,
)


def reference_optimal_cubes_n4(tol: float = DEFAULT_TOL) -> list[HermitianCube]:
    """The tabulated four-path optimal cubes, entry for entry."""
    cubes = []
    for n in range(1, 5):
        canonical: dict[tuple[int, int, int], complex] = {
            (j, j, j): 1.0 / 3.0 for j in range(1, 5) if j != n
        }
        for row, (v, w) in enumerate(coherence_pairs(4)):
            canonical[(1, v, w)] = _N4_PHASES[row, n - 1] * _N4_UNIT
        cubes.append(hermitian_complete(canonical, 4, is_state=True, tol=tol))
    return cubes


def alternative_d_blocks_n4() -> list[np.ndarray]:
    """Two further admissible closing blocks for the four-path multiport.

    The principal-root construction is not the only way to close the
    transformation; these tabulated alternatives also yield self-adjoint
    involutions with the same A and B blocks.  They are shipped as
    constants for verification, not generated.
    """
    i = 1j
    d2 = (
        np.array(
            [
                [1, -i, i, -i, i, 0],
                [i, 1, 1, -1, 0, -i],
                [-i, 1, 1, 0, -1, i],
                [i, -1, 0, 1, 1, -i],
                [-i, 0, -1, 1, 1, i],
                [0, i, -i, i, -i, 1],
            ],
            dtype=complex,
        )
        / 3.0
    )
    d3 = (
        np.array(
            [
                [1, -1, -i, i, 1, 0],
                [-1, 1, -i, i, 0, 1],
                [i, i, 1, 0, -i, -i],
                [-i, -i, 0, 1, i, i],
                [1, 0, i, -i, 1, -1],
                [0, 1, i, -i, -1, 1],
            ],
            dtype=complex,
        )
        / 3.0
    )
    return [d2, d3]


def alternative_multiport_n4(variant: int, tol: float = MATRIX_TOL) -> MultiportMatrix:
    """Four-path multiport closed with one of the tabulated D blocks (1 or 2)."""
    blocks = alternative_d_blocks_n4()
    if variant not in (1, 2):
        raise ValueError(f"variant must be 1 or 2, got {variant}")
    base = assemble_multiport(4, tol)
    matrix = np.array(base.matrix)
    matrix[4:, 4:] = blocks[variant - 1]
    result = replace(base, matrix=matrix)
    report = verify_multiport(result, tol)
    if report.involution_residual > tol or report.adjoint_residual > tol:
        raise ValueError(f"tabulated alternative D block {variant} fails verification")
    return result
