"""Frontend module for hyperbench: report rendering and reproduction cases."""
