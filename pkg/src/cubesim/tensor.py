"""Dense rank-3 Hermitian tensors: the state and effect objects of the cube model.

A density cube generalizes the density matrix by one tensor rank.  It is an
N x N x N complex tensor whose entries are equal under even permutations of
the index triple and complex-conjugated under odd ones.  Diagonal entries
C[n,n,n] play the role of path populations, entries with exactly two equal
indices carry ordinary two-path coherence (and are forced real by the
symmetry), and entries with three distinct indices carry genuine three-path
coherence, which no density matrix can represent.

Semantic indices are 1-based throughout the public API and in serialized
output; the storage layout is an internal detail.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Mapping

import numpy as np

#: Default entrywise comparison tolerance.  Constructions involve roots of
#: unity and matrix square roots, so exact equality is never required.
DEFAULT_TOL = 1e-10

# All slot permutations of an index triple with their signs.  The identity
# comes first so that completion writes a canonical entry before its copies.
_TRIPLE_PERMS: tuple[tuple[tuple[int, int, int], int], ...] = (
    ((0, 1, 2), +1),
    ((1, 2, 0), +1),
    ((2, 0, 1), +1),
    ((1, 0, 2), -1),
    ((0, 2, 1), -1),
    ((2, 1, 0), -1),
)

# The three index transpositions; checking these suffices because even
# permutations are products of two of them.
_TRANSPOSITIONS = ((1, 0, 2), (0, 2, 1), (2, 1, 0))


@dataclass(frozen=True)
class Tolerance:
    """Positive comparison tolerance, overridable per run."""

    eps: float = DEFAULT_TOL

    def __post_init__(self) -> None:
        if not self.eps > 0:
            raise ValueError(f"tolerance must be positive, got {self.eps}")


def _as_cube_array(tensor: object) -> np.ndarray:
    arr = np.asarray(tensor, dtype=complex)
    if arr.ndim != 3 or len(set(arr.shape)) != 1:
        raise ValueError(f"expected an N x N x N tensor, got shape {arr.shape}")
    return arr


def hermiticity_violation(tensor: object) -> float:
    """Largest deviation from the index-exchange conjugation symmetry.

    For every transposition of two index slots the entry must equal the
    complex conjugate of the original entry; the return value is the
    maximum absolute mismatch over all entries and all three
    transpositions (0.0 for an exactly Hermitian tensor).
    """
    arr = _as_cube_array(tensor)
    worst = 0.0
    for axes in _TRANSPOSITIONS:
        worst = max(worst, float(np.abs(arr - np.conj(arr.transpose(axes))).max()))
    return worst


def is_hermitian(tensor: object, tol: float = DEFAULT_TOL) -> bool:
    """True iff every transposition-related entry pair is conjugate within tol."""
    return hermiticity_violation(tensor) <= tol


@dataclass(frozen=True, eq=False)
class HermitianCube:
    """An N-path density cube (state or effect).

    Parameters
    ----------
    n_paths : int
        Number of interferometer paths N, at least 2.
    entries : np.ndarray
        Dense N x N x N complex tensor.  ``entries[j-1, k-1, l-1]`` holds
        the entry with semantic indices (j, k, l).
    is_state : bool
        State cubes additionally satisfy the normalization
        ``sum_n C[n,n,n] = 1`` with each diagonal entry in [0, 1] and
        purity ``(C, C) <= 1``.  Effect cubes (e.g. the path measurement
        cubes) skip those checks.
    tol : float
        Tolerance used for the construction-time invariant checks.
    """

    n_paths: int
    entries: np.ndarray
    is_state: bool = False
    tol: float = field(default=DEFAULT_TOL, repr=False)

    def __post_init__(self) -> None:
        arr = _as_cube_array(self.entries)
        if self.n_paths < 2:
            raise ValueError(f"n_paths must be at least 2, got {self.n_paths}")
        if arr.shape != (self.n_paths,) * 3:
            raise ValueError(
                f"entries shape {arr.shape} does not match n_paths={self.n_paths}"
            )
        violation = hermiticity_violation(arr)
        if violation > self.tol:
            raise ValueError(
                f"tensor is not Hermitian: max conjugation mismatch {violation:.3e}"
            )
        if self.is_state:
            diag = np.einsum("jjj->j", arr)
            total = float(diag.real.sum())
            if abs(total - 1.0) > self.tol:
                raise ValueError(f"state cube diagonal sums to {total}, expected 1")
            if diag.real.min() < -self.tol or diag.real.max() > 1.0 + self.tol:
                raise ValueError("state cube diagonal entries must lie in [0, 1]")
            pur = float(np.vdot(arr, arr).real)
            if pur > 1.0 + self.tol:
                raise ValueError(f"state cube purity {pur} exceeds 1")
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    def entry(self, j: int, k: int, l: int) -> complex:
        """Entry at 1-based semantic indices (j, k, l)."""
        for index in (j, k, l):
            if not 1 <= index <= self.n_paths:
                raise ValueError(
                    f"index {index} out of range 1..{self.n_paths}"
                )
        return complex(self.entries[j - 1, k - 1, l - 1])

    def diagonal(self) -> np.ndarray:
        """Real vector of the N diagonal entries C[n,n,n]."""
        return np.einsum("jjj->j", self.entries).real.copy()

    def purity(self) -> float:
        """Self inner product (C, C); 1 for pure cubes, below 1 for mixed."""
        return cube_inner(self, self)


def cube_inner(m: HermitianCube, c: HermitianCube, tol: float = DEFAULT_TOL) -> float:
    """Inner product ``(M, C) = sum_{jkl} conj(M[jkl]) C[jkl]``.

    Hermitian cubes form a real vector space under this product, so the
    imaginary part of the raw sum must vanish; a residue above ``tol``
    signals a non-Hermitian input and raises.
    """
    if m.n_paths != c.n_paths:
        raise ValueError(
            f"path-count mismatch: {m.n_paths} vs {c.n_paths}"
        )
    raw = complex(np.vdot(m.entries, c.entries))
    if abs(raw.imag) > tol:
        raise ValueError(
            f"inner product has imaginary residue {raw.imag:.3e}; inputs are "
            "not Hermitian to within tolerance"
        )
    return raw.real


def canonical_triples(n_paths: int) -> Iterator[tuple[int, int, int]]:
    """All 1-based index triples with j <= k <= l, in lexicographic order."""
    for j in range(1, n_paths + 1):
        for k in range(j, n_paths + 1):
            for l in range(k, n_paths + 1):
                yield (j, k, l)


def hermitian_complete(
    canonical: Mapping[tuple[int, int, int], complex],
    n_paths: int,
    *,
    is_state: bool = False,
    tol: float = DEFAULT_TOL,
) -> HermitianCube:
    """Build a full Hermitian cube from values on canonical index triples.

    Keys are 1-based triples (j, k, l) with j <= k <= l; missing triples
    default to zero.  Even permutations of a triple receive the stated
    value and odd permutations its conjugate.  A triple with a repeated
    index is its own odd permutation, so its value must be real (within
    ``tol``) for the completion to be consistent; complex values there
    raise rather than being silently projected.
    """
    entries = np.zeros((n_paths,) * 3, dtype=complex)
    for triple, value in canonical.items():
        j, k, l = triple
        if not (1 <= j <= k <= l <= n_paths):
            raise ValueError(
                f"non-canonical or out-of-range index triple {triple} for N={n_paths}"
            )
        value = complex(value)
        if len({j, k, l}) < 3 and abs(value.imag) > tol:
            raise ValueError(
                f"value at repeated-index triple {triple} must be real, "
                f"got imaginary part {value.imag:.3e}"
            )
        base = (j - 1, k - 1, l - 1)
        for perm, sign in _TRIPLE_PERMS:
            pos = (base[perm[0]], base[perm[1]], base[perm[2]])
            entries[pos] = value if sign > 0 else np.conj(value)
    return HermitianCube(n_paths, entries, is_state=is_state, tol=tol)


def extract_canonical(cube: HermitianCube) -> dict[tuple[int, int, int], complex]:
    """Canonical-triple values of a cube, omitting exact zeros.

    Inverse of :func:`hermitian_complete` up to the dropped zeros:
    ``hermitian_complete(extract_canonical(c), c.n_paths)`` reproduces
    ``c`` entrywise.
    """
    out: dict[tuple[int, int, int], complex] = {}
    for j, k, l in canonical_triples(cube.n_paths):
        value = complex(cube.entries[j - 1, k - 1, l - 1])
        if value != 0:
            out[(j, k, l)] = value
    return out


def cube_to_json_dict(cube: HermitianCube) -> dict:
    """JSON-ready form listing canonical triples only.

    Layout: ``{"n_paths": N, "entries": [{"j", "k", "l", "re", "im"}, ...]}``
    with entries in lexicographic canonical order.  Values round-trip at
    full double precision.
    """
    records = [
        {"j": j, "k": k, "l": l, "re": value.real, "im": value.imag}
        for (j, k, l), value in sorted(extract_canonical(cube).items())
    ]
    return {"n_paths": cube.n_paths, "entries": records}


def cube_from_json_dict(
    data: Mapping, *, is_state: bool = False, tol: float = DEFAULT_TOL
) -> HermitianCube:
    """Load a cube from its canonical-triple JSON form via Hermitian completion."""
    n_paths = int(data["n_paths"])
    canonical = {
        (int(rec["j"]), int(rec["k"]), int(rec["l"])): complex(
            float(rec["re"]), float(rec["im"])
        )
        for rec in data["entries"]
    }
    return hermitian_complete(canonical, n_paths, is_state=is_state, tol=tol)
