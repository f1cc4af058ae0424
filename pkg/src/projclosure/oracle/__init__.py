"""Independent algebraic and geometric oracles."""
