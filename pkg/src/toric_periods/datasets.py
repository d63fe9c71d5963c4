"""Charge matrices used throughout the examples and tests."""

POINT = [[1]]
P1 = [[1, 1]]
P2 = [[1, 1, 1]]
P3 = [[1, 1, 1, 1]]
P1xP1 = [[1, 1, 0, 0], [0, 0, 1, 1]]
STACKED = [[1, 1, 1, 0], [0, 0, 1, 1]]

SHIPPED = {"P1": P1, "P2": P2, "P1xP1": P1xP1, "stacked": STACKED}


def projective_space(ell: int):
    """Charge matrix of P^ell: one row of ell + 1 ones."""
    return [[1] * (ell + 1)]
