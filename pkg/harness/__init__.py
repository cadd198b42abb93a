"""Self-test harness running every invariant suite for a group."""
