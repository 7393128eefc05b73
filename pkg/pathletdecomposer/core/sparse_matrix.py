"""
Sparse binary matrices for the cover relations M, D and R.

A SparseBinaryMatrix is an immutable set of (row, col) coordinates with implicit value 1.
It is stored as a scipy CSR matrix with a CSC copy so both row-major and column-major
adjacency are cheap.
"""

import logging
from typing import Iterable, List, Tuple

import numpy as np
from scipy import sparse

from ..errors import IndexOutOfRange, ShapeMismatch

logger = logging.getLogger(__name__)


class SparseBinaryMatrix:
    """Immutable 0/1 matrix backed by scipy.sparse."""

    def __init__(self, matrix: sparse.spmatrix):
        csr = sparse.csr_matrix(matrix, dtype=np.int8)
        csr.sum_duplicates()
        csr.data = np.ones_like(csr.data)
        csr.eliminate_zeros()
        csr.sort_indices()
        self._csr = csr
        self._csc = csr.tocsc()
        self._csc.sort_indices()

    @classmethod
    def from_coordinates(
        cls, n_rows: int, n_cols: int, coordinates: Iterable[Tuple[int, int]]
    ) -> "SparseBinaryMatrix":
        """
        Build a matrix from (row, col) pairs. Duplicates collapse to a single 1.

        Raises:
            IndexOutOfRange: If any coordinate lies outside ``n_rows`` x ``n_cols``
        """
        pairs = np.array(list(coordinates), dtype=np.int64).reshape(-1, 2)
        rows, cols = pairs[:, 0], pairs[:, 1]
        if len(pairs) and (rows.min() < 0 or rows.max() >= n_rows or cols.min() < 0 or cols.max() >= n_cols):
            raise IndexOutOfRange(f"Coordinate outside a {n_rows}x{n_cols} matrix")
        data = np.ones(len(pairs), dtype=np.int8)
        return cls(sparse.coo_matrix((data, (rows, cols)), shape=(n_rows, n_cols)))

    @classmethod
    def zeros(cls, n_rows: int, n_cols: int) -> "SparseBinaryMatrix":
        return cls(sparse.csr_matrix((n_rows, n_cols), dtype=np.int8))

    @classmethod
    def from_dense(cls, array: np.ndarray) -> "SparseBinaryMatrix":
        """Build from a dense array; every nonzero entry becomes 1."""
        return cls(sparse.csr_matrix(np.asarray(array) != 0))

    @property
    def shape(self) -> Tuple[int, int]:
        return self._csr.shape

    @property
    def n_rows(self) -> int:
        return self._csr.shape[0]

    @property
    def n_cols(self) -> int:
        return self._csr.shape[1]

    @property
    def nnz(self) -> int:
        return int(self._csr.nnz)

    @property
    def csr(self) -> sparse.csr_matrix:
        return self._csr

    @property
    def csc(self) -> sparse.csc_matrix:
        return self._csc

    def row_indices(self, row: int) -> np.ndarray:
        """Column indices of the ones in ``row``."""
        start, end = self._csr.indptr[row], self._csr.indptr[row + 1]
        return self._csr.indices[start:end]

    def col_indices(self, col: int) -> np.ndarray:
        """Row indices of the ones in ``col``."""
        start, end = self._csc.indptr[col], self._csc.indptr[col + 1]
        return self._csc.indices[start:end]

    def row_sums(self) -> np.ndarray:
        return np.diff(self._csr.indptr)

    def col_sums(self) -> np.ndarray:
        return np.diff(self._csc.indptr)

    def coordinates(self) -> List[Tuple[int, int]]:
        """All (row, col) pairs in row-major order."""
        coo = self._csr.tocoo()
        return list(zip(coo.row.tolist(), coo.col.tolist()))

    def contains(self, row: int, col: int) -> bool:
        return col in set(self.row_indices(row).tolist())

    def to_dense(self) -> np.ndarray:
        return self._csr.toarray().astype(np.float64)

    def matmul(self, other: "SparseBinaryMatrix") -> sparse.csr_matrix:
        """Integer product ``self @ other`` (entries count overlapping ones)."""
        if self.n_cols != other.n_rows:
            raise ShapeMismatch(f"Cannot multiply {self.shape} by {other.shape}")
        return (self._csr.astype(np.int64) @ other.csr.astype(np.int64)).tocsr()

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparseBinaryMatrix):
            return NotImplemented
        return self.shape == other.shape and (self._csr != other.csr).nnz == 0

    def __repr__(self) -> str:
        return f"SparseBinaryMatrix(shape={self.shape}, nnz={self.nnz})"
