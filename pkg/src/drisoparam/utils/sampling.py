"""
Seeded Sampling.

Reproducible draws of unit vectors of a subspace. The same seed gives the
same sequence on every iteration and every platform.
"""

from typing import Iterator, Optional

import numpy as np

from drisoparam.geometry.models import Subspace


def random_unit_vector(rng: np.random.Generator, dim: int) -> np.ndarray:
    """Uniformly distributed unit vector of R^dim."""
    while True:
        vec = rng.standard_normal(dim)
        norm = np.linalg.norm(vec)
        if norm > 1e-12:
            return vec / norm


class UnitSphereSampler:
    """Uniform unit vectors of 𝔴⊥, expressed in 𝔳 coordinates."""

    def __init__(self, wperp: Subspace, count: int, seed: int, include_basis: bool = False):
        """
        Initialize sampler.

        Args:
            wperp: Subspace to sample from
            count: Number of random vectors
            seed: Seed of numpy's default generator
            include_basis: Prepend the basis vectors of wperp to the draws
        """
        if count < 0:
            raise ValueError(f"Sample count must be non-negative, got {count}")
        self.wperp = wperp
        self.count = count
        self.seed = seed
        self.include_basis = include_basis

    def __iter__(self) -> Iterator[np.ndarray]:
        if self.include_basis:
            yield from (row.copy() for row in self.wperp.basis)
        rng = np.random.default_rng(self.seed)
        for _ in range(self.count):
            yield random_unit_vector(rng, self.wperp.k) @ self.wperp.basis

    def __len__(self) -> int:
        return self.count + (self.wperp.k if self.include_basis else 0)

    def __repr__(self) -> str:
        return f"UnitSphereSampler(k={self.wperp.k}, count={self.count}, seed={self.seed})"


def sphere_sampler(
    wperp: Subspace, count: int, seed: Optional[int] = None, include_basis: bool = False
) -> UnitSphereSampler:
    """Sampler over the unit sphere of wperp (seed 0 when not given)."""
    return UnitSphereSampler(wperp, count, 0 if seed is None else seed, include_basis)
