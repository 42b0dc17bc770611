"""Open book foliation engine: combinatorial pages, region decompositions,
guarded moves, and the split/composite closed-braid reduction."""

__version__ = "0.1.0"
