"""Construction and exact verification of a family of nonadditive distance-2 codes."""

__version__ = "0.1.0"
