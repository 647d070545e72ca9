"""Social scholarly networks: co-mention graphs built from mention streams, plus analysis."""
__version__ = "0.1.0"
