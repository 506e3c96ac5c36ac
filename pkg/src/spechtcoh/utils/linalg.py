"""
Exact linear algebra over GF(p).

Vectors and explicit matrices keep one residue per byte. Elimination runs on
float64 working copies: every entry is below p and every accumulated product
stays below 2**53, so the BLAS products are exact and ``np.mod`` brings them
back to residues. Pivots are always the leftmost column with a nonzero entry,
taken from the first eligible row, so echelon forms are canonical and
reproducible.
"""

import logging
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy import sparse

from spechtcoh.utils.arith import Prime
from spechtcoh.utils.errors import DimensionCapError

MAX_PRIME = 251
ROW_BLOCK = 512
DEFAULT_DENSE_CAP = 6000


def check_dense_cap(n: int, cap: Optional[int], what: str = "dense elimination"):
    if cap is not None and n > cap:
        raise DimensionCapError(
            f"The {what} needs an ambient dimension of {n}, which exceeds the dense cap {cap}. "
            f"Raise dense_cap to at least {n}.",
            required=n,
            cap=cap,
        )


def _check_field(p: int) -> int:
    p = Prime(p)
    if p > MAX_PRIME:
        raise ValueError(f"Residues are stored one per byte; p={p} exceeds {MAX_PRIME}.")
    return int(p)


def _residues(values, p: int) -> np.ndarray:
    return np.mod(np.asarray(values, dtype=np.int64), p).astype(np.uint8)


class GFpVector:
    """A vector over GF(p) in a fixed ambient basis."""

    def __init__(self, p: int, coords):
        self.p = _check_field(p)
        coords = _residues(coords, self.p)
        if coords.ndim != 1:
            raise ValueError(f"Expected a 1-dimensional array, got shape {coords.shape}.")
        coords.flags.writeable = False
        self.coords = coords

    @classmethod
    def zeros(cls, p: int, n: int) -> "GFpVector":
        return cls(p, np.zeros(n, dtype=np.int64))

    @classmethod
    def ones(cls, p: int, n: int) -> "GFpVector":
        return cls(p, np.ones(n, dtype=np.int64))

    @classmethod
    def unit(cls, p: int, n: int, index: int) -> "GFpVector":
        coords = np.zeros(n, dtype=np.int64)
        coords[index] = 1
        return cls(p, coords)

    @classmethod
    def from_terms(cls, p: int, n: int, terms: Iterable[Tuple[int, int]]) -> "GFpVector":
        """Build from ``(index, coefficient)`` pairs; repeated indices add up."""
        coords = np.zeros(n, dtype=np.int64)
        for index, coeff in terms:
            if not 0 <= index < n:
                raise ValueError(f"Index {index} out of range for dimension {n}.")
            coords[index] += coeff
        return cls(p, coords)

    def __len__(self):
        return self.coords.shape[0]

    def __getitem__(self, index):
        return int(self.coords[index])

    def __eq__(self, other):
        if not isinstance(other, GFpVector):
            return NotImplemented
        return self.p == other.p and np.array_equal(self.coords, other.coords)

    __hash__ = None

    def __repr__(self):
        return f"GFpVector(p={self.p}, n={len(self)}, support={self.support().size})"

    def _check_compatible(self, other: "GFpVector"):
        if self.p != other.p or len(self) != len(other):
            raise ValueError("Vectors live in different spaces.")

    def __add__(self, other: "GFpVector") -> "GFpVector":
        self._check_compatible(other)
        return GFpVector(self.p, self.as_int64() + other.as_int64())

    def __sub__(self, other: "GFpVector") -> "GFpVector":
        self._check_compatible(other)
        return GFpVector(self.p, self.as_int64() - other.as_int64())

    def __neg__(self) -> "GFpVector":
        return GFpVector(self.p, -self.as_int64())

    def __rmul__(self, scalar: int) -> "GFpVector":
        return GFpVector(self.p, self.as_int64() * (int(scalar) % self.p))

    __mul__ = __rmul__

    def as_int64(self) -> np.ndarray:
        return self.coords.astype(np.int64)

    def support(self) -> np.ndarray:
        return np.flatnonzero(self.coords)

    def is_zero(self) -> bool:
        return not self.coords.any()

    def is_constant(self) -> bool:
        return len(self) == 0 or bool(np.all(self.coords == self.coords[0]))

    def terms(self) -> List[Tuple[int, int]]:
        support = self.support()
        return [(int(i), int(self.coords[i])) for i in support]


class GFpMatrix:
    """
    A matrix over GF(p), held either dense (uint8) or as a scipy CSR matrix
    with reduced entries.
    """

    def __init__(self, p: int, data):
        self.p = _check_field(p)
        if sparse.issparse(data):
            data = sparse.csr_matrix(data, dtype=np.int64)
            data.data = np.mod(data.data, self.p)
            data.eliminate_zeros()
            data.sort_indices()
            self.data = data.astype(np.uint8)
        else:
            data = _residues(data, self.p)
            if data.ndim != 2:
                raise ValueError(f"Expected a 2-dimensional array, got shape {data.shape}.")
            data.flags.writeable = False
            self.data = data

    @classmethod
    def from_rows(cls, p: int, rows: Sequence[GFpVector], cols: Optional[int] = None):
        if not rows:
            return cls(p, np.zeros((0, cols or 0), dtype=np.int64))
        return cls(p, np.vstack([row.as_int64() for row in rows]))

    @classmethod
    def identity(cls, p: int, n: int) -> "GFpMatrix":
        return cls(p, np.eye(n, dtype=np.int64))

    @property
    def shape(self) -> Tuple[int, int]:
        return self.data.shape

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def is_sparse(self) -> bool:
        return sparse.issparse(self.data)

    def __eq__(self, other):
        if not isinstance(other, GFpMatrix):
            return NotImplemented
        return (
            self.p == other.p
            and self.shape == other.shape
            and np.array_equal(self.toarray(), other.toarray())
        )

    __hash__ = None

    def toarray(self) -> np.ndarray:
        if self.is_sparse:
            return self.data.toarray().astype(np.int64)
        return self.data.astype(np.int64)

    def row_block(self, start: int, stop: int) -> np.ndarray:
        if self.is_sparse:
            return self.data[start:stop].toarray().astype(np.float64)
        return self.data[start:stop].astype(np.float64)

    def apply(self, vector: GFpVector) -> GFpVector:
        if vector.p != self.p or len(vector) != self.cols:
            raise ValueError(
                f"Cannot apply a {self.shape} matrix over GF({self.p}) to a vector "
                f"of length {len(vector)} over GF({vector.p})."
            )
        image = self.data.astype(np.int64) @ vector.as_int64()
        return GFpVector(self.p, image)

    def __matmul__(self, other):
        if isinstance(other, GFpVector):
            return self.apply(other)
        if isinstance(other, GFpMatrix):
            if self.cols != other.rows or self.p != other.p:
                raise ValueError("Matrix shapes or fields do not match.")
            product = self.toarray().astype(np.float64) @ other.toarray().astype(np.float64)
            return GFpMatrix(self.p, np.mod(product, self.p).astype(np.int64))
        return NotImplemented


class GFpSubspace:
    """
    A subspace of GF(p)^n held by its reduced row echelon basis. Two
    subspaces are equal exactly when their bases are equal.
    """

    def __init__(self, p: int, ambient_dim: int, basis: np.ndarray, pivots: Sequence[int]):
        self.p = _check_field(p)
        self.ambient_dim = int(ambient_dim)
        basis = _residues(basis, self.p).reshape(-1, self.ambient_dim)
        basis.flags.writeable = False
        self.basis = basis
        self.pivots = tuple(int(c) for c in pivots)
        if len(self.pivots) != basis.shape[0]:
            raise ValueError("Each basis row needs exactly one pivot.")

    @classmethod
    def zero(cls, p: int, n: int) -> "GFpSubspace":
        return cls(p, n, np.zeros((0, n), dtype=np.int64), ())

    @classmethod
    def full(cls, p: int, n: int) -> "GFpSubspace":
        return cls(p, n, np.eye(n, dtype=np.int64), range(n))

    @property
    def dim(self) -> int:
        return len(self.pivots)

    def __eq__(self, other):
        if not isinstance(other, GFpSubspace):
            return NotImplemented
        return (
            self.p == other.p
            and self.ambient_dim == other.ambient_dim
            and self.pivots == other.pivots
            and np.array_equal(self.basis, other.basis)
        )

    __hash__ = None

    def __repr__(self):
        return f"GFpSubspace(p={self.p}, dim={self.dim}, ambient={self.ambient_dim})"

    def vectors(self) -> List[GFpVector]:
        return [GFpVector(self.p, row) for row in self.basis.astype(np.int64)]

    def residual(self, vector: GFpVector) -> GFpVector:
        """The vector minus its echelon reduction against the basis."""
        if len(vector) != self.ambient_dim or vector.p != self.p:
            raise ValueError("Vector does not live in the ambient space of the subspace.")
        if self.dim == 0:
            return vector
        coords = vector.as_int64().astype(np.float64)
        coeffs = coords[list(self.pivots)]
        reduced = coords - coeffs @ self.basis.astype(np.float64)
        return GFpVector(self.p, np.mod(reduced, self.p).astype(np.int64))

    def coordinates(self, vector: GFpVector) -> np.ndarray:
        """Coordinates of a member vector with respect to the echelon basis."""
        if not contains(self, vector):
            raise ValueError("Vector is not in the subspace.")
        return vector.as_int64()[list(self.pivots)]


def _inverse_table(p: int) -> np.ndarray:
    table = np.zeros(p, dtype=np.float64)
    for x in range(1, p):
        table[x] = pow(x, -1, p)
    return table


def _row_reduce(a: np.ndarray, p: int) -> Tuple[np.ndarray, List[int]]:
    """
    In-place reduced row echelon form of a float64 array of residues.
    Returns the nonzero rows and their pivot columns.
    """
    m, n = a.shape
    inverses = _inverse_table(p)
    pivots = []
    row = 0
    for col in range(n):
        if row == m:
            break
        nonzero = np.flatnonzero(a[row:, col])
        if nonzero.size == 0:
            continue
        found = row + nonzero[0]
        if found != row:
            a[[row, found]] = a[[found, row]]
        a[row, col:] = np.mod(a[row, col:] * inverses[int(a[row, col])], p)
        factors = a[:, col].copy()
        factors[row] = 0
        targets = np.flatnonzero(factors)
        if targets.size:
            a[targets, col:] = np.mod(
                a[targets, col:] - np.outer(factors[targets], a[row, col:]), p
            )
        pivots.append(col)
        row += 1
    return a[:row], pivots


def rref(matrix: GFpMatrix) -> Tuple[GFpMatrix, List[int], int]:
    """Reduced row echelon form, padded with zero rows to the input shape."""
    work = np.mod(matrix.toarray(), matrix.p).astype(np.float64)
    reduced, pivots = _row_reduce(work, matrix.p)
    full = np.zeros(matrix.shape, dtype=np.int64)
    full[: len(pivots)] = reduced.astype(np.int64)
    return GFpMatrix(matrix.p, full), pivots, len(pivots)


class RowSpaceBuilder:
    """
    Reduced row echelon basis of a row space that arrives in blocks. Each
    block is first cleared on the known pivot columns with one matrix
    product, the residual is reduced on its own, and the new pivots are
    cleared from the old rows. The result equals the echelon form of the
    stacked rows.
    """

    def __init__(self, p: int, n: int):
        self.p = _check_field(p)
        self.n = int(n)
        self.basis = np.zeros((0, self.n), dtype=np.float64)
        self.pivots = np.zeros(0, dtype=np.intp)

    @property
    def rank(self) -> int:
        return self.pivots.shape[0]

    def add(self, rows) -> int:
        """Add a block of rows (array, scipy sparse or GFpMatrix); returns the rank gained."""
        if isinstance(rows, GFpMatrix):
            rows = rows.data
        if sparse.issparse(rows):
            rows = rows.toarray()
        block = np.mod(np.asarray(rows, dtype=np.float64), self.p)
        if block.ndim != 2 or block.shape[1] != self.n:
            raise ValueError(f"Expected rows of length {self.n}, got shape {block.shape}.")
        if block.shape[0] == 0 or self.rank == self.n:
            return 0
        if self.rank:
            block = np.mod(block - block[:, self.pivots] @ self.basis, self.p)
        block = block[block.any(axis=1)]
        if block.shape[0] == 0:
            return 0
        residual, new_pivots = _row_reduce(block, self.p)
        if not new_pivots:
            return 0
        if self.rank:
            self.basis = np.mod(self.basis - self.basis[:, new_pivots] @ residual, self.p)
        merged = np.vstack([self.basis, residual])
        pivots = np.concatenate([self.pivots, np.asarray(new_pivots, dtype=np.intp)])
        order = np.argsort(pivots, kind="stable")
        self.basis = merged[order]
        self.pivots = pivots[order]
        logging.debug(f"Row space rank {self.rank}/{self.n} (+{len(new_pivots)})")
        return len(new_pivots)

    def add_matrix(self, matrix, floor_dim: Optional[int] = None, block_rows: int = ROW_BLOCK):
        """
        Stream a (possibly sparse) matrix in row blocks. Stops early once the
        rank reaches ``n - floor_dim``.
        """
        if isinstance(matrix, GFpMatrix):
            matrix = matrix.data
        matrix = sparse.csr_matrix(matrix) if sparse.issparse(matrix) else np.asarray(matrix)
        for start in range(0, matrix.shape[0], block_rows):
            if self.saturated(floor_dim):
                return
            block = matrix[start : start + block_rows]
            self.add(block.toarray() if sparse.issparse(block) else block)

    def saturated(self, floor_dim: Optional[int] = None) -> bool:
        limit = self.n - (floor_dim or 0)
        return self.rank >= limit

    def row_space(self) -> GFpSubspace:
        return GFpSubspace(self.p, self.n, self.basis.astype(np.int64), self.pivots)

    def kernel(self) -> GFpSubspace:
        """Right kernel {x : rows . x = 0} in canonical echelon form."""
        free = np.setdiff1d(np.arange(self.n), self.pivots)
        if free.size == 0:
            return GFpSubspace.zero(self.p, self.n)
        generators = np.zeros((free.size, self.n), dtype=np.float64)
        generators[np.arange(free.size), free] = 1
        if self.rank:
            generators[:, self.pivots] = np.mod(-self.basis[:, free].T, self.p)
        reduced, pivots = _row_reduce(generators, self.p)
        return GFpSubspace(self.p, self.n, reduced.astype(np.int64), pivots)


def kernel(matrix: GFpMatrix) -> GFpSubspace:
    builder = RowSpaceBuilder(matrix.p, matrix.cols)
    builder.add_matrix(matrix)
    return builder.kernel()


def span(p: int, n: int, vectors: Sequence[GFpVector]) -> GFpSubspace:
    builder = RowSpaceBuilder(p, n)
    if vectors:
        builder.add(np.vstack([v.as_int64() for v in vectors]))
    return builder.row_space()


def annihilator(subspace: GFpSubspace) -> GFpSubspace:
    """{y : y . x = 0 for every x in the subspace}."""
    builder = RowSpaceBuilder(subspace.p, subspace.ambient_dim)
    builder.add(subspace.basis)
    return builder.kernel()


def _check_same_space(a: GFpSubspace, b: GFpSubspace):
    if a.p != b.p or a.ambient_dim != b.ambient_dim:
        raise ValueError("Subspaces live in different ambient spaces.")


def subspace_sum(a: GFpSubspace, b: GFpSubspace) -> GFpSubspace:
    _check_same_space(a, b)
    builder = RowSpaceBuilder(a.p, a.ambient_dim)
    builder.add(a.basis)
    builder.add(b.basis)
    return builder.row_space()


def intersect(a: GFpSubspace, b: GFpSubspace) -> GFpSubspace:
    """a ∩ b as the joint kernel of the two annihilators."""
    _check_same_space(a, b)
    builder = RowSpaceBuilder(a.p, a.ambient_dim)
    builder.add(annihilator(a).basis)
    builder.add(annihilator(b).basis)
    return builder.kernel()


def contains(subspace: GFpSubspace, vector: GFpVector) -> bool:
    return subspace.residual(vector).is_zero()


def member_quotient(a: GFpSubspace, b: GFpSubspace) -> int:
    """dim(a + b) - dim(b)."""
    return subspace_sum(a, b).dim - b.dim


def _complement_rows(matrix, allowed: Sequence[GFpVector], p: int):
    """
    Rows whose joint kernel is {x : matrix . x in span(allowed)}: with T the
    echelon basis of span(allowed) and pivots q, subtract T^t . matrix[q].
    """
    matrix = matrix.data if isinstance(matrix, GFpMatrix) else matrix
    if not allowed:
        return matrix
    target = span(p, matrix.shape[0], list(allowed))
    if target.dim == 0:
        return matrix
    t_transpose = sparse.csr_matrix(target.basis.astype(np.int64).T)
    if sparse.issparse(matrix):
        matrix = sparse.csr_matrix(matrix, dtype=np.int64)
        return matrix - t_transpose @ matrix[list(target.pivots)]
    matrix = np.asarray(matrix, dtype=np.int64)
    return matrix - t_transpose @ matrix[list(target.pivots)]


def solve_affine(
    constraints: Sequence[Tuple[GFpMatrix, Sequence[GFpVector]]],
    n: int,
    p: int,
    floor_dim: Optional[int] = None,
) -> GFpSubspace:
    """
    Solutions of the stacked conditions ``matrix . x in span(allowed)``.

    An empty constraint list gives the whole space. ``floor_dim`` is a known
    lower bound on the answer's dimension; elimination stops as soon as the
    rank makes that bound tight.
    """
    builder = RowSpaceBuilder(p, n)
    for matrix, allowed in constraints:
        if builder.saturated(floor_dim):
            break
        if matrix.cols != n:
            raise ValueError(f"Constraint has {matrix.cols} columns, expected {n}.")
        builder.add_matrix(_complement_rows(matrix, allowed, p), floor_dim=floor_dim)
    return builder.kernel()
