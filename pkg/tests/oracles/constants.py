"""Values computed by the scripts in this package, frozen for the tests."""

# deuteron_oracle.py: dense 4x4 diagonalisation
GROUND_ENERGY = -1.7488649141752755
OPTIMAL_THETA = 0.5942779101067037
# diagonal of the deuteron matrix on |00> and |01> (hand sum of Z terms)
E_00 = 5.907 + 0.21829 - 6.125
E_01 = 5.907 - 0.21829 - 6.125

# brute-force multiplicative orders mod 15 (exponents 1..15)
ORDERS_MOD_15 = {2: 4, 4: 2, 7: 4, 8: 4, 11: 2, 13: 4, 14: 2}
