"""equihf: exact Z/2-equivariant cohomology algebra, symplectic index theory,
and flow-space combinatorics."""

__version__ = "0.1.0"
