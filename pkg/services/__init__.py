"""Computational services: groups, exact arithmetic, characters, D(G), bundles and dimensions."""
