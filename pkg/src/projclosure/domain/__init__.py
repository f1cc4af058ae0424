"""Field, models, errors, budgets and seeds."""
