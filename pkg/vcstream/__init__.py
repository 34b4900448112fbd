"""
vcstream - parameterized vertex cover over graph streams
Insertion-only, promised dynamic and unrestricted dynamic regimes
"""

__version__ = "1.0.0"
