"""CLI interface for nggp-mix."""
