"""Construction and verification of pseudo-caps, eggs, Desarguesian spreads
and translation generalised quadrangles over finite fields."""

__version__ = "0.1.0"
