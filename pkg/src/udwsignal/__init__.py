"""Leading-order signaling between Unruh-DeWitt detectors in flat spacetime."""

__version__ = "0.1.0"
