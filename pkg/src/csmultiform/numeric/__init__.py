"""Numeric validation on explicit and grid solutions of the Darboux system."""
