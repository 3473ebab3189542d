"""Tests package for the polar-svd service."""
