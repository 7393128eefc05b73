"""
Unit tests for SparseBinaryMatrix.
"""

import numpy as np
import pytest

from pathletdecomposer.core import SparseBinaryMatrix
from pathletdecomposer.errors import IndexOutOfRange, ShapeMismatch


class TestSparseBinaryMatrix:
    """Test cases for SparseBinaryMatrix."""

    @pytest.fixture
    def matrix(self):
        return SparseBinaryMatrix.from_coordinates(3, 4, [(0, 1), (2, 3), (0, 1), (1, 0), (0, 3)])

    def test_duplicates_collapse(self, matrix):
        assert matrix.shape == (3, 4)
        assert matrix.nnz == 4
        assert matrix.to_dense().max() == 1.0

    def test_row_and_column_access(self, matrix):
        assert matrix.row_indices(0).tolist() == [1, 3]
        assert matrix.col_indices(3).tolist() == [0, 2]
        assert matrix.row_sums().tolist() == [2, 1, 1]
        assert matrix.col_sums().tolist() == [1, 1, 0, 2]
        assert matrix.contains(2, 3)
        assert not matrix.contains(2, 2)

    def test_coordinates_are_row_major(self, matrix):
        assert matrix.coordinates() == [(0, 1), (0, 3), (1, 0), (2, 3)]

    def test_out_of_range(self):
        with pytest.raises(IndexOutOfRange):
            SparseBinaryMatrix.from_coordinates(2, 2, [(0, 2)])
        with pytest.raises(IndexOutOfRange):
            SparseBinaryMatrix.from_coordinates(2, 2, [(-1, 0)])

    def test_empty_and_zeros(self):
        empty = SparseBinaryMatrix.from_coordinates(2, 3, [])
        assert empty.nnz == 0
        assert empty == SparseBinaryMatrix.zeros(2, 3)

    def test_from_dense(self):
        dense = np.array([[0.0, 0.3], [2.0, 0.0]])
        matrix = SparseBinaryMatrix.from_dense(dense)

        assert matrix.to_dense().tolist() == [[0.0, 1.0], [1.0, 0.0]]

    def test_matmul_counts_overlaps(self):
        left = SparseBinaryMatrix.from_dense(np.array([[1, 1], [0, 1]]))
        right = SparseBinaryMatrix.from_dense(np.array([[1, 0], [1, 1]]))

        assert (left.matmul(right)).toarray().tolist() == [[2, 1], [1, 1]]

    def test_matmul_shape_mismatch(self, matrix):
        with pytest.raises(ShapeMismatch):
            matrix.matmul(matrix)

    def test_equality(self, matrix):
        same = SparseBinaryMatrix.from_coordinates(3, 4, [(1, 0), (0, 3), (2, 3), (0, 1)])
        other = SparseBinaryMatrix.from_coordinates(3, 4, [(1, 0)])

        assert matrix == same
        assert matrix != other
        assert matrix != SparseBinaryMatrix.zeros(4, 3)
