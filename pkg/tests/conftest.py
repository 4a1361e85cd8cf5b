"""Shared test configuration (kept minimal; fixtures live in the files
that use them)."""
