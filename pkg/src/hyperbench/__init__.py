"""Hyperbench package.

A workbench for finite hyperalgebra: monoids, modules and pairs over monoids,
hypermagmas and their hyperpairs, residue hypermodules, tensor products over
monoids and the morphisms between all of these. The package is organized into
`backend` (the algebra), `frontend` (reports and reproduction cases) and
`utils` (logging, configuration and structure files).

Modules should be imported from the `hyperbench` package (for example:
`from hyperbench.backend.hyper import Hypermagma`).
"""
