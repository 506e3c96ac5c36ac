"""
The maps psi_{i,v}, the fixed vector f_lambda and the Specht module S^lambda.

psi_{i,v} maps M^lambda to M^nu, nu = (.., lambda_i + lambda_{i+1} - v, v, ..),
sending a tabloid to the sum of the nu-tabloids obtained by keeping a v-subset
of row i+1 in place and moving the rest of that row up into row i. Rows are
1-based and the family used for the kernel intersection is
i = 1..r-1, v = 0..lambda_{i+1} - 1.

nu is a composition: an interior zero row (v = 0) stays in place and the
rows are never sorted, so tabloid identification matches the source shape.
"""

import itertools
import logging
from dataclasses import dataclass, field
from typing import Iterator, List, Optional

import numpy as np
from scipy import sparse

from spechtcoh.utils.arith import binom_mod_p
from spechtcoh.utils.combinatorics import (
    DEFAULT_DIMENSION_CAP,
    Composition,
    Partition,
    Permutation,
    StandardTableau,
    hook_length_dimension,
    standard_tableaux,
    tabloid_basis,
)
from spechtcoh.utils.linalg import (
    GFpMatrix,
    GFpSubspace,
    GFpVector,
    RowSpaceBuilder,
    check_dense_cap,
)


def f_lambda(shape: Composition, p: int, cap: int = DEFAULT_DIMENSION_CAP) -> GFpVector:
    """The sum of all tabloids of the shape."""
    return GFpVector.ones(p, tabloid_basis(shape, cap).size)


def act_vector(sigma: Permutation, shape: Composition, vector: GFpVector,
               cap: int = DEFAULT_DIMENSION_CAP) -> GFpVector:
    """sigma . vector in M^shape."""
    basis = tabloid_basis(shape, cap)
    if len(vector) != basis.size:
        raise ValueError(f"Vector of length {len(vector)} is not in M^{shape} (dim {basis.size}).")
    coords = np.empty(basis.size, dtype=np.int64)
    coords[basis.permutation_of(sigma)] = vector.as_int64()
    return GFpVector(vector.p, coords)


def psi_target(partition: Composition, i: int, v: int) -> Composition:
    parts = list(partition.parts)
    merged = parts[i - 1] + parts[i] - v
    return Composition(tuple(parts[: i - 1] + [merged, v] + parts[i + 1 :]))


def _check_indices(partition: Composition, i: int, v: int):
    r = partition.num_rows
    if not 1 <= i < r:
        raise ValueError(f"Row index i={i} must satisfy 1 <= i < {r} for shape {partition}.")
    if not 0 <= v <= partition[i]:
        raise ValueError(
            f"v={v} must satisfy 0 <= v <= {partition[i]} (the length of row {i + 1})."
        )


def f_image_scalar(partition: Composition, i: int, v: int, p: int) -> int:
    """psi_{i,v}(f_lambda) = C(lambda_i + lambda_{i+1} - v, lambda_{i+1} - v) . f_nu."""
    _check_indices(partition, i, v)
    upper = partition[i - 1] + partition[i] - v
    return binom_mod_p(upper, partition[i] - v, p)


@dataclass
class PsiMap:
    source: Composition
    i: int
    v: int
    target: Composition
    matrix: GFpMatrix = field(repr=False)

    @property
    def p(self) -> int:
        return self.matrix.p

    @property
    def label(self) -> str:
        return f"psi_({self.i},{self.v})"

    def apply(self, vector: GFpVector) -> GFpVector:
        return self.matrix.apply(vector)

    def image_multiple(self, vector: GFpVector) -> Optional[int]:
        """c with psi(vector) = c . f_nu, or None when the image is not such a multiple."""
        image = self.apply(vector)
        if not image.is_constant():
            return None
        return image[0] if len(image) else 0


def psi_matrix(
    partition: Composition, i: int, v: int, p: int, cap: int = DEFAULT_DIMENSION_CAP
) -> PsiMap:
    """
    Build psi_{i,v} as a sparse (dim M^nu) x (dim M^lambda) matrix.

    Each column holds C(lambda_{i+1}, v) ones. The columns are produced all at
    once per kept subset: the positions of row i+1 in every source word are
    gathered, the moved positions are rewritten to row i, and the resulting
    words are ranked in the target basis.
    """
    _check_indices(partition, i, v)
    source = tabloid_basis(partition, cap)
    target_shape = psi_target(partition, i, v)
    target = tabloid_basis(target_shape, cap)
    words = source.words
    n = source.size
    k = partition[i]
    positions = np.nonzero(words == i + 1)[1].reshape(n, k)
    rows = np.arange(n)[:, None]
    image_ranks = []
    for kept in itertools.combinations(range(k), v):
        moved = [j for j in range(k) if j not in kept]
        moved_words = np.array(words, copy=True)
        if moved:
            moved_words[rows, positions[:, moved]] = i
        image_ranks.append(target.rank_words(moved_words))
    row_index = np.concatenate(image_ranks)
    col_index = np.tile(np.arange(n), len(image_ranks))
    data = np.ones(row_index.shape[0], dtype=np.int64)
    matrix = sparse.csr_matrix(
        (data, (row_index, col_index)), shape=(target.size, n), dtype=np.int64
    )
    logging.debug(
        f"psi_({i},{v}) on M^{partition}: {target.size} x {n}, {matrix.nnz} nonzeros"
    )
    return PsiMap(partition, i, v, target_shape, GFpMatrix(p, matrix))


def psi_indices(partition: Composition) -> List[tuple]:
    return [(i, v) for i in range(1, partition.num_rows) for v in range(partition[i])]


def iter_psi_maps(
    partition: Composition, p: int, cap: int = DEFAULT_DIMENSION_CAP
) -> Iterator[PsiMap]:
    """The kernel-intersection family, built one map at a time."""
    for i, v in psi_indices(partition):
        yield psi_matrix(partition, i, v, p, cap)


def psi_family(partition: Composition, p: int, cap: int = DEFAULT_DIMENSION_CAP) -> List[PsiMap]:
    return list(iter_psi_maps(partition, p, cap))


@dataclass
class SpechtSpace:
    partition: Partition
    p: int
    subspace: GFpSubspace
    psi_family: List[PsiMap] = field(repr=False)

    @property
    def dim(self) -> int:
        return self.subspace.dim


def specht_by_kernels(
    partition: Partition,
    p: int,
    cap: int = DEFAULT_DIMENSION_CAP,
    dense_cap: Optional[int] = None,
) -> SpechtSpace:
    """
    S^lambda as the joint kernel of the psi family. With no maps (one row)
    the intersection is all of M^lambda.
    """
    basis = tabloid_basis(partition, cap)
    check_dense_cap(basis.size, dense_cap, f"kernel intersection for S^{partition}")
    maps = psi_family(partition, p, cap)
    builder = RowSpaceBuilder(p, basis.size)
    for psi in maps:
        builder.add_matrix(psi.matrix)
    subspace = builder.kernel()
    logging.debug(f"S^{partition} over GF({p}) by kernels: dim {subspace.dim}")
    return SpechtSpace(partition, p, subspace, maps)


def _column_group(tableau: StandardTableau):
    """Per column: (images of the column entries, sign) for every rearrangement."""
    per_column = []
    for column in tableau.columns():
        options = []
        for order in itertools.permutations(range(len(column))):
            images = tuple(column[j] for j in order)
            sign = Permutation(tuple(j + 1 for j in order)).sign()
            options.append((images, sign))
        per_column.append(options)
    return per_column


def polytabloid(
    tableau: StandardTableau, p: int, cap: int = DEFAULT_DIMENSION_CAP
) -> GFpVector:
    """
    e_t = sum over the column group C_t of sgn(pi) {pi t}. The entry in
    column position j (row j + 1) is sent to its image under pi, so
    ``word[pi(x) - 1]`` is the row of x in t.
    """
    shape = tableau.shape
    basis = tabloid_basis(shape, cap)
    groups = _column_group(tableau)
    words = []
    signs = []
    for choice in itertools.product(*groups):
        word = [0] * shape.d
        sign = 1
        for images, column_sign in choice:
            for row, entry in enumerate(images, start=1):
                word[entry - 1] = row
            sign *= column_sign
        words.append(word)
        signs.append(sign)
    ranks = basis.rank_words(np.asarray(words, dtype=np.int8))
    coords = np.zeros(basis.size, dtype=np.int64)
    np.add.at(coords, ranks, np.asarray(signs, dtype=np.int64))
    return GFpVector(p, coords)


def specht_standard_basis(
    partition: Partition,
    p: int,
    cap: int = DEFAULT_DIMENSION_CAP,
    dense_cap: Optional[int] = None,
) -> GFpSubspace:
    """Span of the standard polytabloids, in canonical echelon form."""
    basis = tabloid_basis(partition, cap)
    check_dense_cap(basis.size, dense_cap, f"polytabloid basis for S^{partition}")
    builder = RowSpaceBuilder(p, basis.size)
    block = []
    for tableau in standard_tableaux(partition, cap):
        block.append(polytabloid(tableau, p, cap).as_int64())
        if len(block) == 256:
            builder.add(np.vstack(block))
            block = []
    if block:
        builder.add(np.vstack(block))
    subspace = builder.row_space()
    expected = hook_length_dimension(partition)
    if subspace.dim != expected:
        logging.warning(
            f"Polytabloids for {partition} span {subspace.dim} dimensions, expected {expected}"
        )
    return subspace


def in_specht(
    partition: Partition,
    p: int,
    vector: GFpVector,
    cap: int = DEFAULT_DIMENSION_CAP,
    maps: Optional[List[PsiMap]] = None,
) -> bool:
    """Kernel-intersection membership test by sparse application of every psi."""
    for psi in maps if maps is not None else iter_psi_maps(partition, p, cap):
        if not psi.apply(vector).is_zero():
            logging.debug(f"{psi.label} does not vanish on the vector")
            return False
    return True
