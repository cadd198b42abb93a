"""Invariant suites, one class of checks per concern."""
