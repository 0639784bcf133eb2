"""Config loading, engine initialization and report writers."""
