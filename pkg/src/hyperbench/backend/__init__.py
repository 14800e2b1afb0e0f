"""Backend module for hyperbench.

This module contains the finite algebra: structures, axiom checks and
constructions.
"""
