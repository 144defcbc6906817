"""A small integer complex ``R^3 <- R^5 <- R^5 <- R^3`` with all ranks 2 and all homology 1."""

from .chain_complex import ChainComplex

A1 = [
    [14, -4, 16, 3, -9],
    [14, -5, 20, 9, 1],
    [4, 1, -4, -12, -24],
]
A2 = [
    [-43, -50, -27, -51, 9],
    [12, -24, 36, 0, -12],
    [35, 34, 27, 39, -9],
    [-3, -10, 3, -6, -1],
    [-11, -10, -9, -12, 3],
]
A3 = [
    [-8, -16, -12],
    [-5, -1, -15],
    [-1, 13, -14],
    [12, 12, 28],
    [-1, 25, -24],
]


def small_complex(field="QQ") -> ChainComplex:
    C = ChainComplex((3, 5, 5, 3), (A1, A2, A3), field="QQ")
    return C if field == "QQ" else C.to_float()
