"""torus-ech: exact embedded contact homology data of T(2,q) torus-knot fibrations."""

__version__ = "0.1.0"
