"""Exact linear algebra and the combinatorial formulas."""
