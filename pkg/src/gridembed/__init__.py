"""gridembed: plane-sparse embeddings of simplicial complexes into the unit grid.

The package builds maps from bounded-degree simplicial complexes into an
integer lattice box so that every axis-parallel plane meets only a bounded
number of simplex images, verifies those incidence bounds independently,
and benchmarks how the box side scales with the vertex count.
"""

__version__ = "0.1.0"
