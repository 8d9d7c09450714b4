"""Two-dimensional Yang-Mills theory with Wilson graphs and spin Calogero-Moser propagators.

Submodules are imported on demand so that the command-line tool starts quickly:
``lie``, ``tensor``, ``surface``, ``haar``, ``calogero``, ``wilson`` and ``verify``.
"""

__version__ = "0.1.0"
