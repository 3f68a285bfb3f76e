"""Kirillov-Reshetikhin crystals, energy functions and Demazure characters."""

__version__ = "0.1.0"
