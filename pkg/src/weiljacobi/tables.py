# Tables transcribed from the construction of the universal object.

WORDS = tuple(
    "1234 1243 1324 1342 1423 1432 2134 2143 2314 2341 2413 2431 "
    "3124 3142 3214 3241 3412 3421 4123 4132 4213 4231 4312 4321".split()
)

# positions 5..10 that carry a product of two generators, per word
QUADRATIC_SLOTS = {
    "1234": (),
    "1243": (10,),
    "1324": (8,),
    "1342": (8, 9),
    "1423": (9, 10),
    "1432": (8, 9, 10),
    "2134": (5,),
    "2143": (5, 10),
    "2314": (5, 6),
    "2341": (5, 6, 7),
    "2413": (5, 7, 10),
    "2431": (5, 6, 7, 10),
    "3124": (6, 8),
    "3142": (6, 8, 9),
    "3214": (5, 6, 8),
    "3241": (5, 6, 7, 8),
    "3412": (6, 7, 8, 9),
    "3421": (5, 6, 7, 8, 9),
    "4123": (7, 9, 10),
    "4132": (7, 8, 9, 10),
    "4213": (5, 7, 9, 10),
    "4231": (5, 6, 7, 9, 10),
    "4312": (6, 7, 8, 9, 10),
    "4321": (5, 6, 7, 8, 9, 10),
}

# position carrying d1d2d3, d1d2d4, d1d3d4, d2d3d4 (None = absent)
CUBIC_SLOTS = {
    "1234": (None, None, None, None),
    "1243": (None, None, 21, 26),
    "1324": (11, None, None, 27),
    "1342": (11, 16, None, 28),
    "1423": (None, 16, 21, 29),
    "1432": (11, 16, 21, 30),
    "2134": (12, 17, None, None),
    "2143": (12, 17, 21, 26),
    "2314": (13, 17, 22, None),
    "2341": (13, 18, 23, None),
    "2413": (12, 18, 24, 26),
    "2431": (13, 18, 25, 26),
    "3124": (14, None, 22, 27),
    "3142": (14, 16, 22, 28),
    "3214": (15, 17, 22, 27),
    "3241": (15, 18, 23, 27),
    "3412": (14, 19, 23, 28),
    "3421": (15, 20, 23, 28),
    "4123": (None, 19, 24, 29),
    "4132": (11, 19, 24, 30),
    "4213": (12, 20, 24, 29),
    "4231": (13, 20, 25, 29),
    "4312": (14, 19, 25, 30),
    "4321": (15, 20, 25, 30),
}

# the displayed coordinate formulas, transcribed literally (positions >= 5)
TEXT_FORMULAS = {
    "1234": {},
    "1243": {10: (3, 4), 21: (1, 3, 4), 26: (2, 3, 4), 31: (1, 2, 3, 4)},
    "1324": {8: (2, 3), 11: (1, 2, 3), 27: (2, 3, 4), 32: (1, 2, 3, 4)},
    "1342": {8: (2, 3), 9: (2, 4), 11: (1, 2, 3), 16: (1, 2, 4), 28: (2, 3, 4), 33: (1, 2, 3, 4)},
    "1423": {9: (2, 4), 10: (3, 4), 16: (1, 2, 4), 21: (1, 3, 4), 29: (2, 3, 4), 34: (1, 2, 3, 4)},
    "1432": {8: (2, 3), 9: (2, 4), 10: (3, 4), 11: (1, 2, 3), 16: (1, 2, 4), 21: (1, 3, 4), 30: (2, 3, 4), 35: (1, 2, 3, 4)},
    "2134": {5: (1, 2), 12: (1, 2, 3), 17: (1, 2, 4), 36: (1, 2, 3, 4)},
    "2143": {5: (1, 2), 10: (3, 4), 12: (1, 2, 3), 17: (1, 2, 4), 21: (1, 3, 4), 26: (2, 3, 4), 37: (1, 2, 3, 4)},
    "2314": {5: (1, 2), 6: (1, 3), 13: (1, 2, 3), 17: (1, 2, 4), 22: (1, 3, 4), 38: (1, 2, 3, 4)},
    "2341": {5: (1, 2), 6: (1, 3), 7: (1, 4), 13: (1, 2, 3), 18: (1, 2, 4), 23: (1, 3, 4), 39: (1, 2, 3, 4)},
    "2413": {5: (1, 2), 7: (1, 4), 10: (3, 4), 12: (1, 2, 3), 18: (1, 2, 4), 24: (1, 3, 4), 26: (2, 3, 4), 40: (1, 2, 3, 4)},
    "2431": {5: (1, 2), 6: (1, 3), 7: (1, 4), 10: (3, 4), 13: (1, 2, 3), 18: (1, 2, 4), 25: (1, 3, 4), 26: (2, 3, 4), 41: (1, 2, 3, 4)},
    "3124": {6: (1, 3), 8: (2, 3), 14: (1, 2, 3), 22: (1, 3, 4), 27: (2, 3, 4), 42: (1, 2, 3, 4)},
    "3142": {6: (1, 3), 8: (2, 3), 9: (2, 4), 14: (1, 2, 3), 16: (1, 2, 4), 22: (1, 3, 4), 28: (2, 3, 4), 43: (1, 2, 3, 4)},
    "3214": {5: (1, 2), 6: (1, 3), 8: (2, 3), 15: (1, 2, 3), 17: (1, 2, 4), 22: (1, 3, 4), 27: (2, 3, 4), 44: (1, 2, 3, 4)},
    "3241": {5: (1, 2), 6: (1, 3), 7: (1, 4), 8: (2, 3), 15: (1, 2, 3), 18: (1, 2, 4), 23: (1, 3, 4), 27: (2, 3, 4), 45: (1, 2, 3, 4)},
    "3412": {6: (1, 3), 7: (1, 4), 8: (2, 3), 9: (2, 4), 14: (1, 2, 3), 19: (1, 2, 4), 23: (1, 3, 4), 28: (2, 3, 4), 46: (1, 2, 3, 4)},
    "3421": {5: (1, 2), 6: (1, 3), 7: (1, 4), 8: (2, 3), 9: (2, 4), 15: (1, 2, 3), 20: (1, 2, 4), 23: (1, 3, 4), 28: (2, 3, 4), 47: (1, 2, 3, 4)},
    "4123": {7: (1, 4), 8: (2, 4), 9: (3, 4), 19: (1, 2, 4), 24: (1, 3, 4), 29: (2, 3, 4), 48: (1, 2, 3, 4)},
    "4132": {7: (1, 4), 8: (2, 3), 9: (2, 4), 10: (3, 4), 11: (1, 2, 3), 19: (1, 2, 4), 24: (1, 3, 4), 30: (2, 3, 4), 49: (1, 2, 3, 4)},
    "4213": {5: (1, 2), 7: (1, 4), 9: (2, 4), 10: (3, 4), 12: (1, 2, 3), 20: (1, 2, 4), 24: (1, 3, 4), 29: (2, 3, 4), 50: (1, 2, 3, 4)},
    "4231": {5: (1, 2), 6: (1, 3), 7: (1, 4), 9: (2, 4), 10: (3, 4), 13: (1, 2, 3), 20: (1, 2, 4), 25: (1, 3, 4), 29: (2, 3, 4), 51: (1, 2, 3, 4)},
    "4312": {6: (1, 3), 7: (1, 4), 8: (2, 3), 9: (2, 4), 10: (3, 4), 14: (1, 2, 3), 19: (1, 2, 4), 25: (1, 3, 4), 30: (2, 3, 4), 52: (1, 2, 3, 4)},
    "4321": {5: (1, 2), 6: (1, 3), 7: (1, 4), 8: (2, 3), 9: (2, 4), 10: (3, 4), 15: (1, 2, 3), 20: (1, 2, 4), 25: (1, 3, 4), 30: (2, 3, 4), 53: (1, 2, 3, 4)},
}
