"""Computational checks for torus-invariant functions on loop-group charts of GL_n."""

__version__ = "0.1.0"
