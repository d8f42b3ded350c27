"""Figure rendering for boltlab CSV/JSON artifacts.

Display layer only: every figure is a pure function of the serialized
inputs, and nothing here imports or re-runs the computational modules.
"""

__version__ = "0.1.0"
