"""Tiny text-processing toolkit."""
