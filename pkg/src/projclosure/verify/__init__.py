"""Verification suites: each contract is checked against an independent oracle."""
