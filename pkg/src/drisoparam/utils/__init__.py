"""Utility functions module."""

from drisoparam.utils.sampling import UnitSphereSampler, random_unit_vector, sphere_sampler

__all__ = ["UnitSphereSampler", "random_unit_vector", "sphere_sampler"]
