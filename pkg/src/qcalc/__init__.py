"""q-calculus objects with exact and certified-numeric evaluation."""

__version__ = "0.1.0"
