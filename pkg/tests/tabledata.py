"""Printed golden values used across the test suite: the classified extremal
polynomials of both classes, their trees and their ray laminations."""

import math
from fractions import Fraction as Fr

from droplets.polyfamily import BddPolynomial, ExtPolynomial
from droplets.trees import BiAngledTree, RootedBinaryTree

SQ2 = math.sqrt(2.0)

# --- exterior class (degree d+1 maps, d = 2..5) -----------------------------

EXT_D2 = ExtPolynomial(2, (0, -0.5))
EXT_D3 = ExtPolynomial(3, (2 / 3, 0, -1 / 3))
EXT_D4 = ExtPolynomial(4, (-5 / 8, -5 / 16, 0, -0.25))
EXT_D5_STAR = ExtPolynomial(5, (0, 2 * SQ2 / 5, 0, 0, -0.2))
# the last three are printed rounded approximations of the true members
EXT_D5_PATH = ExtPolynomial(5, (-0.6, 0.3, -0.2, 0, -0.2))
EXT_D5_ZIG = ExtPolynomial(5, (-0.71j, 0, 0.71j / 3, 0, -0.2))
EXT_D5_ZAG = ExtPolynomial(5, (0.71j, 0, -0.71j / 3, 0, -0.2))

EXT_EXACT = [EXT_D2, EXT_D3, EXT_D4]
EXT_D5_APPROX = [EXT_D5_STAR, EXT_D5_PATH, EXT_D5_ZIG, EXT_D5_ZAG]

LAMINATION = {
    "d3": [(Fr(1, 8), Fr(5, 8))],
    "d4": [(Fr(1, 15), Fr(11, 15)), (Fr(2, 15), Fr(7, 15))],
    "d5_star": [(Fr(5, 24), Fr(23, 24)), (Fr(7, 24), Fr(13, 24)), (Fr(15, 24), Fr(21, 24))],
    "d5_path": [(Fr(5, 24), Fr(23, 24)), (Fr(7, 24), Fr(13, 24)), (Fr(6, 24), Fr(18, 24))],
    "d5_zig": [(Fr(1, 24), Fr(19, 24)), (Fr(7, 24), Fr(13, 24)), (Fr(6, 24), Fr(18, 24))],
    "d5_zag": [(Fr(5, 24), Fr(23, 24)), (Fr(11, 24), Fr(17, 24)), (Fr(6, 24), Fr(18, 24))],
}


def tree_single():
    return BiAngledTree.single_vertex()


def tree_two():
    return BiAngledTree.from_edge_slots(2, [(0, 1, 0)])


def tree_path3():
    return BiAngledTree.from_edge_slots(3, [(0, 1, 0), (1, 2, 1)])


def tree_star4():
    return BiAngledTree.from_edge_slots(4, [(0, 1, 0), (0, 2, 1), (0, 3, 2)])


def tree_path4(g1, g2):
    slot2 = g1 % 3
    slot3 = (g1 + g2) % 3
    return BiAngledTree.from_edge_slots(
        4, [(0, 1, 0), (1, 2, slot2), (2, 3, slot3)]
    )


# --- bounded class (degree d polynomials, d = 2..5) --------------------------

BDD_D2 = BddPolynomial(2, (0.5,))
BDD_D3 = BddPolynomial(3, (2 * SQ2 / 3, 1 / 3))

A_D4 = 0.5 * math.sqrt(3 * (math.sqrt(15.0) - 3.0))
T_D4 = math.acos((3.0 / 16.0) * math.sqrt(9.0 + 5.0 * math.sqrt(15.0))) / 3.0
BDD_D4_FIRST = BddPolynomial(
    4,
    (
        1.5 * A_D4 * complex(math.cos(T_D4), math.sin(T_D4)),
        A_D4 * complex(math.cos(T_D4), -math.sin(T_D4)),
        0.25,
    ),
)
BDD_D4_SECOND = BddPolynomial(
    4,
    (
        1.5 * A_D4 * complex(math.cos(T_D4), -math.sin(T_D4)),
        A_D4 * complex(math.cos(T_D4), math.sin(T_D4)),
        0.25,
    ),
)

S23 = math.sqrt(2.0 / 3.0)
BDD_D5 = BddPolynomial(5, (1.6 * S23, 1.2, 0.8 * S23, 0.2))
