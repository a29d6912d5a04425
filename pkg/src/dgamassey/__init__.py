"""Exact cohomology and Massey products of finite-dimensional commutative DGAs."""

__version__ = "0.1.0"
