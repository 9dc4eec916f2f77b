"""dini_kit: Dini functions, their zeros, expansions, and inequality certification."""

__version__ = "0.1.0"
