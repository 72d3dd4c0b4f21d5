"""Exact-arithmetic quantization of Lie bialgebras through deformed
shuffle algebras: free Lie combinatorics, associativity-family solving,
universal R-matrices, the universal Lie Yang-Baxter system, and
truncated-order quantization of concrete bialgebras."""

__version__ = "0.1.0"
