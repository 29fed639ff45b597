"""Exact workbench for polytopal general probabilistic theories.

Decides bit symmetry and self-duality of finite-dimensional state spaces,
builds the invariant inner product attached to a transitive symmetry group,
and studies maximal tensor products through vertex classification and CHSH
values.
"""

from gptlab.scalar import EXACT, Backend, float_backend
from gptlab.errors import GptLabError

__all__ = ["EXACT", "Backend", "float_backend", "GptLabError"]
__version__ = "0.1.0"
