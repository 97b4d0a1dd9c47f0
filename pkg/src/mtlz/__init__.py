"""Graph classification engine for multitime Landau-Zener (MTLZ) models."""

__version__ = "0.1.0"
