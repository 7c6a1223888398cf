"""Dal: a modal logic of actions with time, a labelled tableau prover and a
scenario engine for reasoning with default persistence."""
from pathlib import Path

DATA = Path(__file__).parent / "data"

__version__ = "0.1.0"
