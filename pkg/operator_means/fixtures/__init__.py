"""Stored oracle values, read with importlib_resources."""
