"""Exact integer toolkit for surface-like pseudolattices and exceptional bases."""
