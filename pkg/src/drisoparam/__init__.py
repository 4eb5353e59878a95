"""
drisoparam - Isoparametric tubes in Damek-Ricci spaces

Builds Damek-Ricci spaces from Clifford module data, computes generalized
Kähler angles of subspaces of 𝔳, and certifies whether the tubes around the
submanifolds S_𝔴 have constant principal curvatures.
"""

__version__ = "0.3.0"
__license__ = "MIT"

from drisoparam.core.config import Config
from drisoparam.core.logger import setup_logger

__all__ = ["Config", "setup_logger"]
