"""
Test suite for dictionary quality metric analyzers.
"""

import os
import sys

# Add the project root to the path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "..", ".."))

from pathletdecomposer.models import Dictionary, Pathlet, Trajectory


def build_corpus(sequences, start_id=0):
    """Trajectories numbered from ``start_id``."""
    return [Trajectory(start_id + i, tuple(seq)) for i, seq in enumerate(sequences)]


def build_dictionary(sequences):
    """Flat dictionary numbered in the given order."""
    return Dictionary(tuple(Pathlet(i, tuple(seq)) for i, seq in enumerate(sequences)))


def corridor_corpus():
    """Ten trips along edges 0-3 and two along 4-5 on a 16-edge graph."""
    return build_corpus([(0, 1, 2, 3)] * 10 + [(4, 5)] * 2)


def corridor_dictionary():
    return build_dictionary([(0, 1, 2, 3), (4, 5)])
