"""
Harness utilities for vcstream
Stream files, generators, oracles and invariant checks
"""
