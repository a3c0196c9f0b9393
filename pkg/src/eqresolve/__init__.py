"""Exact canonical resolution of finite linear group actions on balls and sign boxes."""
from .errors import *  # noqa: F401,F403
from .groups import FiniteMatrixGroup, generate_group
from .linalg import Subspace
from .strata import isotropy_poset

__version__ = "0.1.0"
