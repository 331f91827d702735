"""Small arithmetic helpers."""


def add(a, b):
    """Add two integers."""
    return a + b


def sub(a, b):
    return add(a, -b)
