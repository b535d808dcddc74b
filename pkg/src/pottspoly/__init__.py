"""Polymer-model approximation of ferromagnetic Potts and random cluster partition functions."""

__version__ = "0.1.0"
