import itertools

import pytest

from subedit import derive_params

# Fixed vectors from the construction's worked examples.
PART_X = "01001" "000111100" "000111101001" "0001111"
PART_PARTS = ("01001", "000111100", "000111101001", "0001111")
PAIR_X = "000011" "000111001111"
PAIR_Y = "00001100001" "0001111"


def all_strings(n):
    return ("".join(b) for b in itertools.product("01", repeat=n))


@pytest.fixture(scope="session")
def p14():
    return derive_params(2, 14)
