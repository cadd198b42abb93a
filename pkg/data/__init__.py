"""Static preset data for the finite groups the engine knows by name."""
