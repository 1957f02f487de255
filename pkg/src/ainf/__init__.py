"""Exact and numeric verification tools for cubical chains, A-infinity sign
conventions, moduli stratifications, brane gradings and C0 estimates."""

__version__ = "0.1.0"
