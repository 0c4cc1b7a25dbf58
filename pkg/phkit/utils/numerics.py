from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Tolerance:
    """Relative-plus-absolute zero band: |x| <= atol + rtol * scale."""

    atol: float = 1e-12
    rtol: float = 1e-10

    def band(self, scale=1.0):
        return self.atol + self.rtol * abs(float(scale))

    def is_zero(self, value, scale=1.0):
        return abs(value) <= self.band(scale)

    def vector_is_zero(self, vector, scale=1.0):
        return float(np.linalg.norm(vector)) <= self.band(scale)

    def sign(self, value, scale=1.0):
        if self.is_zero(value, scale):
            return 0
        return 1 if value > 0 else -1


DEFAULT_TOLERANCE = Tolerance()
DEFAULT_RANK_CUTOFF = 1e-10


def rank_from_singular_values(singular_values, cutoff=DEFAULT_RANK_CUTOFF):
    if singular_values.size == 0 or singular_values[0] == 0.0:
        return 0
    return int(np.sum(singular_values > cutoff * singular_values[0]))


def numeric_rank(matrix, cutoff=DEFAULT_RANK_CUTOFF):
    singular_values = np.linalg.svd(np.atleast_2d(matrix), compute_uv=False)
    return rank_from_singular_values(singular_values, cutoff)


def nullspace(matrix, cutoff=DEFAULT_RANK_CUTOFF):
    """Orthonormal rows spanning {x : matrix @ x = 0}."""
    matrix = np.atleast_2d(np.asarray(matrix, dtype=float))
    _, singular_values, vh = np.linalg.svd(matrix, full_matrices=True)
    rank = rank_from_singular_values(singular_values, cutoff)
    return vh[rank:].copy()


def orthonormal_rows(vectors, cutoff=DEFAULT_RANK_CUTOFF):
    vectors = np.atleast_2d(np.asarray(vectors, dtype=float))
    if vectors.size == 0:
        return vectors.reshape(0, vectors.shape[-1])
    u, singular_values, _ = np.linalg.svd(vectors.T, full_matrices=False)
    rank = rank_from_singular_values(singular_values, cutoff)
    return u[:, :rank].T


def span_residual(first, second):
    """Largest component of either row space lying outside the other."""
    q1 = orthonormal_rows(first)
    q2 = orthonormal_rows(second)
    if q1.shape[0] != q2.shape[0]:
        return float("inf")
    if q1.shape[0] == 0:
        return 0.0
    outside_second = q1 - (q1 @ q2.T) @ q2
    outside_first = q2 - (q2 @ q1.T) @ q1
    return float(max(np.abs(outside_second).max(), np.abs(outside_first).max()))


def realify(matrix):
    matrix = np.asarray(matrix)
    return np.concatenate([matrix.real.ravel(), matrix.imag.ravel()])


def linear_map_matrix(function, size):
    """Matrix of a real-linear map given as a callable on R^size."""
    identity = np.eye(size)
    return np.column_stack([function(identity[i]) for i in range(size)])
