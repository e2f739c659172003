"""Exact protocols, covers and counting bounds for nondeterministic communication"""

from .hadamard import encode, is_codeword, local_test
from .heqfun import heq, neq
from .version import __version__

__all__ = [
    "__version__",
    "encode",
    "heq",
    "is_codeword",
    "local_test",
    "neq",
]
