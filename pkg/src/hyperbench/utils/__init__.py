"""Utilities: logging, configuration and structure files."""
