"""Unit tests for the hyperbench package."""
