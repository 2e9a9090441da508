"""Chern-Simons Lagrangian multiforms for the generalised Darboux system.

Exact symbolic checks of the Chern-Simons identities for the Darboux gauge
field, plus numeric validation on explicit and grid solutions.
"""

__version__ = "0.1.0"
