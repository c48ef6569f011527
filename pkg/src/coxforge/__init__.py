"""Cox rings of diagonal blow-ups: presentations, ideal-transfer pipeline, and checks."""

__version__ = "0.1.0"
