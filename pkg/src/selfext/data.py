"""Counterexample operators on the sum-zero hyperplanes of l1^4, l1^5 and l1^6.

Each matrix acts on ``{x : sum x = 0}`` in the basis ``u_k = e_1 - e_k``;
column j holds the coordinates of the image of ``u_{j+2}``. ``LOWER_BOUNDS``
lists the extension ratio each one is known to force.
"""

from fractions import Fraction

from .exact import Mat

_HALF = Fraction(1, 2)

MT4 = Mat([
    [1, 1, 1],
    [1, -1, -1],
    [-1, 1, -1],
]).scale(_HALF)

MT5 = Mat([
    [1, 1, -1, -1],
    [1, 0, 1, 1],
    [-1, -1, 0, -1],
    [-1, -1, -1, 0],
]).scale(_HALF)

MT6 = Mat([
    [1, 1, 1, 1, 0],
    [0, 0, 1, -1, 1],
    [1, 0, 0, 1, 1],
    [-1, -1, 0, 0, -1],
    [-1, 1, -1, 0, 0],
]).scale(_HALF)

OPERATORS = {4: MT4, 5: MT5, 6: MT6}
LOWER_BOUNDS = {4: Fraction(5, 4), 5: Fraction(4, 3), 6: Fraction(3, 2)}

# Hand certificate for l1^4: sum of four column estimates, constant 5 over total weight 4.
R4_CERTIFICATE = {
    "vertices": [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)],
    "functionals": [(1, -1, 1, 1), (-1, 1, 1, -1), (-1, 1, -1, 1), (1, -1, -1, -1)],
    "weights": [1, 1, 1, 1],
}
