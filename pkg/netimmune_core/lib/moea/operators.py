"""
Variation and selection operators on boolean bit vectors.
"""

from typing import Optional, Tuple

import numpy as np

from netimmune_core.lib.errors import GraphValidationError


def random_population(rng: np.random.Generator, size: int, n: int) -> np.ndarray:
    """size uniform-random bit vectors of length n."""
    return rng.random((size, n)) < 0.5


def initial_population(
    rng: np.random.Generator,
    size: int,
    n: int,
    init: Optional[np.ndarray] = None,
) -> np.ndarray:
    """Seeded rows first (at most size of them), padded with random rows."""
    if init is None:
        return random_population(rng, size, n)
    seeded = np.asarray(init, dtype=bool)
    if seeded.ndim != 2 or seeded.shape[1] != n:
        raise GraphValidationError(f"initial population has shape {seeded.shape}, expected (m, {n})")
    seeded = seeded[:size]
    if len(seeded) == size:
        return seeded.copy()
    return np.vstack([seeded, random_population(rng, size - len(seeded), n)])


def binary_tournament(rng: np.random.Generator, rank: np.ndarray, crowding: np.ndarray) -> int:
    """Winner of one tournament: lower rank, then larger crowding, then the first drawn."""
    a, b = rng.integers(len(rank), size=2)
    if rank[a] != rank[b]:
        return int(a if rank[a] < rank[b] else b)
    if crowding[a] != crowding[b]:
        return int(a if crowding[a] > crowding[b] else b)
    return int(a)


def uniform_crossover(
    rng: np.random.Generator,
    a: np.ndarray,
    b: np.ndarray,
    p_c: float,
) -> Tuple[np.ndarray, np.ndarray]:
    """With probability p_c swap each bit between the parents with probability 1/2."""
    if rng.random() >= p_c:
        return a.copy(), b.copy()
    swap = rng.random(len(a)) < 0.5
    return np.where(swap, b, a), np.where(swap, a, b)


def bit_flip_mutation(rng: np.random.Generator, x: np.ndarray, p_m: float) -> np.ndarray:
    return x ^ (rng.random(len(x)) < p_m)


def variation(
    rng: np.random.Generator,
    a: np.ndarray,
    b: np.ndarray,
    p_c: float,
    p_m: float,
) -> Tuple[np.ndarray, np.ndarray]:
    """Two offspring of parents a and b: uniform crossover then per-bit mutation."""
    first, second = uniform_crossover(rng, a, b, p_c)
    return bit_flip_mutation(rng, first, p_m), bit_flip_mutation(rng, second, p_m)
