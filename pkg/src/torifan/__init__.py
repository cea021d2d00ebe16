"""Exact toric geometry for foliated extremal-ray computations."""
