"""Frozen expected values.  Each is re-derived by a slow reference in
``test_fixtures.py`` so a drift in either side is caught."""

# read-once functions over B2: all of them / those with every variable essential
B2_COUNT = {0: 2, 1: 4, 2: 16, 3: 152, 4: 2680, 5: 68968}
B2_ESSENTIAL_COUNT = {1: 2, 2: 10, 3: 114, 4: 2154, 5: 56946}

# read-once over {AND, OR}: non-constant functions / every variable essential
AND_OR_COUNT = {1: 1, 2: 4, 3: 17, 4: 100, 5: 837}
AND_OR_ESSENTIAL_COUNT = {1: 1, 2: 2, 3: 8, 4: 52, 5: 472}

# 3-variable functions with every variable essential that are discriminatory
DISCRIMINATORY_3_COUNT = 24
DISCRIMINATORY_3_FIRST = (0x1B, frozenset({0}))  # smallest table, witness {x1}
MUX_3 = "g{d8,3}(x1,x2,x3)"  # x1 ? x2 : x3, witness {x1}

# read-once over B3 at n = 4 with every variable essential but not 3-satisfiable
NON_3_SAT_COUNT_B3_N4 = 960
NON_3_SAT_FIRST_B3_N4 = 0xE4  # NOR(g{1b,3}(x1,x2,x3), x4)
NON_3_SAT_MUX = "g{d8,3}(x1,x2,(x3 ^ x4))"
