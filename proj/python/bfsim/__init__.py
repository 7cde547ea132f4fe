"""Distributed BFS simulator with compressed and sieved frontier exchange."""

try:
    from bfsim._bfsim import *  # noqa: F401,F403  (installed layout)
except ImportError:
    from _bfsim import *  # noqa: F401,F403  (build-tree layout)
