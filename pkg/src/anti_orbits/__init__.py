"""anti-orbits package."""
