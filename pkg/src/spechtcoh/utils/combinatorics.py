"""
Compositions, partitions, tabloids and standard tableaux.

A tabloid is stored as its row-assignment word: ``word[e]`` is the (1-based)
row that contains entry ``e + 1``. The word is the canonical form of the
tabloid, and the tabloids of a shape are indexed by the lexicographic order
of their words. Every matrix, echelon form and certificate in the package
inherits this order.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from math import factorial, prod
from typing import List, Sequence, Tuple

import numpy as np

from spechtcoh.utils.errors import DimensionCapError

DEFAULT_DIMENSION_CAP = 200_000


@dataclass(frozen=True)
class Composition:
    """A finite sequence of nonnegative integers. Trailing zeros are dropped."""

    parts: Tuple[int, ...]

    def __post_init__(self):
        parts = tuple(int(x) for x in self.parts)
        if any(x < 0 for x in parts):
            raise ValueError(f"Composition parts must be nonnegative, got {parts}.")
        while parts and parts[-1] == 0:
            parts = parts[:-1]
        object.__setattr__(self, "parts", parts)

    @property
    def d(self) -> int:
        return sum(self.parts)

    @property
    def num_rows(self) -> int:
        return len(self.parts)

    def __iter__(self):
        return iter(self.parts)

    def __len__(self):
        return len(self.parts)

    def __getitem__(self, index):
        return self.parts[index]

    def __str__(self):
        return "(" + ",".join(str(x) for x in self.parts) + ")"

    def dashed(self) -> str:
        return "-".join(str(x) for x in self.parts) or "0"


@dataclass(frozen=True)
class Partition(Composition):
    """A composition with nonincreasing positive parts."""

    def __post_init__(self):
        super().__post_init__()
        parts = self.parts
        if any(x == 0 for x in parts):
            raise ValueError(f"Partition parts must be positive, got {parts}.")
        if any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
            raise ValueError(f"Partition {parts} is not in nonincreasing order.")

    @classmethod
    def parse(cls, text: str) -> "Partition":
        """Parse the command-line form ``"8,3"``."""
        try:
            parts = tuple(int(x) for x in text.replace(" ", "").split(",") if x)
        except ValueError:
            raise ValueError(f"Could not parse partition '{text}'.")
        if not parts:
            raise ValueError("A partition needs at least one part.")
        if any(x <= 0 for x in parts):
            raise ValueError(f"Partition '{text}' has a part that is not positive.")
        return cls(parts)

    def scaled(self, factor: int) -> "Partition":
        return Partition(tuple(factor * x for x in self.parts))


def generate_partitions(d: int) -> List[Partition]:
    """All partitions of d in reverse lexicographic order, (d) first."""

    def _build(remaining, largest):
        if remaining == 0:
            yield ()
            return
        for first in range(min(remaining, largest), 0, -1):
            for rest in _build(remaining - first, first):
                yield (first,) + rest

    return [Partition(parts) for parts in _build(d, d)]


def conjugate(partition: Partition) -> Partition:
    parts = partition.parts
    if not parts:
        return Partition(())
    return Partition(tuple(sum(1 for x in parts if x > j) for j in range(parts[0])))


def multinomial(parts: Sequence[int]) -> int:
    """d! / prod(parts!) as an exact integer."""
    return factorial(sum(parts)) // prod(factorial(x) for x in parts)


def check_cap(count: int, cap: int, what: str = "tabloid basis"):
    if cap is not None and count > cap:
        raise DimensionCapError(
            f"The {what} has dimension {count}, which exceeds the cap {cap}. "
            f"Raise the cap to at least {count}.",
            required=count,
            cap=cap,
        )


@dataclass(frozen=True)
class Permutation:
    """A permutation of {1..d} given by its images (1-based)."""

    images: Tuple[int, ...]

    def __post_init__(self):
        images = tuple(int(x) for x in self.images)
        if sorted(images) != list(range(1, len(images) + 1)):
            raise ValueError(f"{images} is not a permutation of 1..{len(images)}.")
        object.__setattr__(self, "images", images)

    @property
    def d(self) -> int:
        return len(self.images)

    def __call__(self, x: int) -> int:
        return self.images[x - 1]

    def __mul__(self, other: "Permutation") -> "Permutation":
        # (self * other)(x) = self(other(x))
        if self.d != other.d:
            raise ValueError("Cannot compose permutations of different degrees.")
        return Permutation(tuple(self.images[y - 1] for y in other.images))

    def inverse(self) -> "Permutation":
        inv = [0] * self.d
        for x, y in enumerate(self.images, start=1):
            inv[y - 1] = x
        return Permutation(tuple(inv))

    def sign(self) -> int:
        seen = [False] * self.d
        transpositions = 0
        for start in range(self.d):
            length = 0
            x = start
            while not seen[x]:
                seen[x] = True
                x = self.images[x] - 1
                length += 1
            if length:
                transpositions += length - 1
        return -1 if transpositions % 2 else 1

    def is_identity(self) -> bool:
        return all(x == i for i, x in enumerate(self.images, start=1))

    @classmethod
    def identity(cls, d: int) -> "Permutation":
        return cls(tuple(range(1, d + 1)))

    @classmethod
    def transposition(cls, d: int, i: int, j: int) -> "Permutation":
        images = list(range(1, d + 1))
        images[i - 1], images[j - 1] = images[j - 1], images[i - 1]
        return cls(tuple(images))


def coxeter_generators(d: int) -> List[Permutation]:
    """The adjacent transpositions s_1, ..., s_{d-1}."""
    return [Permutation.transposition(d, i, i + 1) for i in range(1, d)]


@dataclass(frozen=True)
class Tabloid:
    word: Tuple[int, ...]
    shape: Composition

    def __post_init__(self):
        word = tuple(int(x) for x in self.word)
        if len(word) != self.shape.d:
            raise ValueError(
                f"Word of length {len(word)} does not fit shape {self.shape}."
            )
        counts = [0] * self.shape.num_rows
        for row in word:
            if not 1 <= row <= self.shape.num_rows:
                raise ValueError(f"Row index {row} out of range for shape {self.shape}.")
            counts[row - 1] += 1
        if tuple(counts) != self.shape.parts:
            raise ValueError(
                f"Word {word} has row sizes {tuple(counts)}, expected {self.shape.parts}."
            )
        object.__setattr__(self, "word", word)

    def rows(self) -> Tuple[Tuple[int, ...], ...]:
        return tuple(
            tuple(e + 1 for e, row in enumerate(self.word) if row == i)
            for i in range(1, self.shape.num_rows + 1)
        )


def act(sigma: Permutation, tabloid: Tabloid) -> Tabloid:
    """Left action: the row holding sigma(e) is the row that held e."""
    if sigma.d != tabloid.shape.d:
        raise ValueError("Permutation degree does not match the tabloid.")
    word = [0] * sigma.d
    for e, row in enumerate(tabloid.word, start=1):
        word[sigma(e) - 1] = row
    return Tabloid(tuple(word), tabloid.shape)


def act_on_words(sigma: Permutation, words: np.ndarray) -> np.ndarray:
    """Vectorized ``act`` on an (N, d) array of words."""
    images = np.asarray(sigma.images, dtype=np.intp) - 1
    moved = np.empty_like(words)
    moved[:, images] = words
    return moved


def render_tabloid(tabloid: Tabloid) -> str:
    """
    Two-row tabloids are shown by their second row (``"134"``, or
    ``"4,10,11"`` once d >= 10); one-row tabloids as ``"∅"``.
    """
    rows = tabloid.rows()
    if tabloid.shape.num_rows <= 1:
        return "∅"
    sep = "," if tabloid.shape.d >= 10 else ""
    if tabloid.shape.num_rows == 2:
        return sep.join(str(x) for x in rows[1]) or "∅"
    return "|" + "|".join(sep.join(str(x) for x in row) for row in rows) + "|"


class TabloidBasis:
    """
    The tabloids of one composition, indexed in lexicographic word order.
    Ranking and unranking walk the word once, keeping the number of
    arrangements of the remaining multiset of rows.
    """

    def __init__(self, shape: Composition):
        self.shape = shape
        self.parts = shape.parts
        self.d = shape.d
        self.size = multinomial(self.parts)
        self._words = None

    def __len__(self):
        return self.size

    @property
    def words(self) -> np.ndarray:
        if self._words is None:
            words = self.unrank_many(np.arange(self.size, dtype=np.int64))
            words.flags.writeable = False
            self._words = words
        return self._words

    def tabloid(self, index: int) -> Tabloid:
        return self.unrank(index)

    def rank(self, tabloid) -> int:
        word = tabloid.word if isinstance(tabloid, Tabloid) else tuple(tabloid)
        if isinstance(tabloid, Tabloid) and tabloid.shape.parts != self.parts:
            raise ValueError(f"Tabloid of shape {tabloid.shape} is not in M^{self.shape}.")
        counts = list(self.parts)
        total = self.d
        arrangements = self.size
        index = 0
        for row in word:
            for c in range(row - 1):
                index += arrangements * counts[c] // total
            arrangements = arrangements * counts[row - 1] // total
            counts[row - 1] -= 1
            total -= 1
        return index

    def unrank(self, index: int) -> Tabloid:
        if not 0 <= index < self.size:
            raise IndexError(f"Index {index} out of range for {self.size} tabloids.")
        counts = list(self.parts)
        total = self.d
        arrangements = self.size
        word = []
        for _ in range(self.d):
            for c, count in enumerate(counts):
                block = arrangements * count // total
                if index < block:
                    word.append(c + 1)
                    arrangements = block
                    counts[c] -= 1
                    break
                index -= block
            total -= 1
        return Tabloid(tuple(word), self.shape)

    def rank_words(self, words: np.ndarray) -> np.ndarray:
        words = np.asarray(words)
        n = words.shape[0]
        rows = np.arange(n)
        counts = np.tile(np.asarray(self.parts, dtype=np.int64), (n, 1))
        arrangements = np.full(n, self.size, dtype=np.int64)
        ranks = np.zeros(n, dtype=np.int64)
        total = self.d
        for pos in range(self.d):
            w = words[:, pos].astype(np.int64) - 1
            for c in range(len(self.parts)):
                block = arrangements * counts[:, c] // total
                ranks += np.where(w > c, block, 0)
            arrangements = arrangements * counts[rows, w] // total
            counts[rows, w] -= 1
            total -= 1
        return ranks

    def unrank_many(self, indices: np.ndarray) -> np.ndarray:
        index = np.array(indices, dtype=np.int64, copy=True)
        n = index.shape[0]
        counts = np.tile(np.asarray(self.parts, dtype=np.int64), (n, 1))
        arrangements = np.full(n, self.size, dtype=np.int64)
        words = np.zeros((n, self.d), dtype=np.int8)
        total = self.d
        for pos in range(self.d):
            chosen = np.zeros(n, dtype=bool)
            for c in range(len(self.parts)):
                block = arrangements * counts[:, c] // total
                take = ~chosen & (index < block)
                skip = ~chosen & ~take
                index[skip] -= block[skip]
                words[take, pos] = c + 1
                arrangements[take] = block[take]
                counts[take, c] -= 1
                chosen |= take
            total -= 1
        return words

    def permutation_of(self, sigma: Permutation) -> np.ndarray:
        """``perm[k]`` is the rank of sigma applied to tabloid k."""
        return self.rank_words(act_on_words(sigma, self.words))

    def tabloid_from_rows(self, rows: Sequence[Sequence[int]]) -> Tabloid:
        word = [0] * self.d
        for i, row in enumerate(rows, start=1):
            for e in row:
                word[e - 1] = i
        return Tabloid(tuple(word), self.shape)

    def tabloid_from_second_row(self, second_row: Sequence[int]) -> Tabloid:
        """Two-row shortcut: every entry not listed sits in row one."""
        if len(self.parts) != 2:
            raise ValueError(f"Shape {self.shape} is not a two-row shape.")
        word = [1] * self.d
        for e in second_row:
            word[e - 1] = 2
        return Tabloid(tuple(word), self.shape)


@lru_cache(maxsize=64)
def _cached_basis(parts: Tuple[int, ...]) -> TabloidBasis:
    logging.debug(f"Building tabloid basis for shape {parts}")
    return TabloidBasis(Composition(parts))


def tabloid_basis(shape: Composition, cap: int = DEFAULT_DIMENSION_CAP) -> TabloidBasis:
    """The (cached) tabloid basis of M^shape; raises when it exceeds the cap."""
    check_cap(multinomial(shape.parts), cap, f"permutation module M^{shape}")
    return _cached_basis(shape.parts)


def enumerate_tabloids(shape: Composition, cap: int = DEFAULT_DIMENSION_CAP) -> List[Tabloid]:
    basis = tabloid_basis(shape, cap)
    return [Tabloid(tuple(int(x) for x in w), basis.shape) for w in basis.words]


@dataclass(frozen=True)
class StandardTableau:
    rows: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in row) for row in self.rows)
        object.__setattr__(self, "rows", rows)
        for row in rows:
            if any(row[j] >= row[j + 1] for j in range(len(row) - 1)):
                raise ValueError(f"Rows of {rows} do not increase.")
        for col in self.columns():
            if any(col[j] >= col[j + 1] for j in range(len(col) - 1)):
                raise ValueError(f"Columns of {rows} do not increase.")

    @property
    def shape(self) -> Partition:
        return Partition(tuple(len(row) for row in self.rows))

    def columns(self) -> Tuple[Tuple[int, ...], ...]:
        if not self.rows:
            return ()
        return tuple(
            tuple(row[j] for row in self.rows if len(row) > j)
            for j in range(len(self.rows[0]))
        )

    def row_word(self) -> Tuple[int, ...]:
        d = sum(len(row) for row in self.rows)
        word = [0] * d
        for i, row in enumerate(self.rows, start=1):
            for e in row:
                word[e - 1] = i
        return tuple(word)


def standard_tableaux(
    partition: Partition, cap: int = DEFAULT_DIMENSION_CAP
) -> List[StandardTableau]:
    """Standard tableaux, built by placing 1..d row by row into addable cells."""
    check_cap(hook_length_dimension(partition), cap, f"Specht module S^{partition}")
    parts = partition.parts
    d = partition.d
    filling = [[] for _ in parts]
    result = []

    def _place(entry):
        if entry > d:
            result.append(StandardTableau(tuple(tuple(row) for row in filling)))
            return
        for i, row in enumerate(filling):
            if len(row) < parts[i] and (i == 0 or len(filling[i - 1]) > len(row)):
                row.append(entry)
                _place(entry + 1)
                row.pop()

    _place(1)
    return result


def hook_length_dimension(partition: Partition) -> int:
    parts = partition.parts
    conj = conjugate(partition).parts
    hooks = prod(
        (parts[i] - j - 1) + (conj[j] - i - 1) + 1
        for i in range(len(parts))
        for j in range(parts[i])
    )
    return factorial(partition.d) // hooks

