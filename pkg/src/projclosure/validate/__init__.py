"""Input validation: arrangements and rank tables."""
