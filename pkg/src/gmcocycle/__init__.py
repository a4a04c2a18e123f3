"""Eisenstein cocycles for GL_n as formal Milnor K-symbols, with exact
lattice arithmetic and a numeric d log regulator oracle."""

__version__ = "0.1.0"
