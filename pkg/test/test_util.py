from hypothesis import given, strategies as st

from util.helpers import (
    CustomLogger,
    ceil_half,
    indices_of,
    is_subset,
    mask_of,
    tverberg_row_count,
)


@given(st.integers(min_value=0, max_value=10**6))
def test_ceil_half(value):
    assert ceil_half(value) == (value + 1) // 2


def test_mask_of():
    assert mask_of([]) == 0
    assert mask_of([0, 2]) == 0b101
    assert mask_of([3, 3]) == 0b1000


@given(st.sets(st.integers(min_value=0, max_value=60)))
def test_indices_of(indices):
    assert indices_of(mask_of(indices)) == sorted(indices)


def test_is_subset():
    assert is_subset(0b001, 0b101)
    assert is_subset(0, 0)
    assert not is_subset(0b010, 0b101)


def test_tverberg_row_count():
    assert tverberg_row_count(1) == 1
    assert tverberg_row_count(3) == 13
    assert tverberg_row_count(10) == 181


def test_custom_logger():
    logger = CustomLogger(__name__)
    logger.log("fuuf")
    logger.log("fuuf", CustomLogger.LEVEL_WARN)
    logger.log("fuuf", CustomLogger.LEVEL_DEBUG)
    logger.info("feef")
    logger.warning("soos")
    logger.error("meem")
    logger.success("yay")
    logger.failure("nay")
    logger.info(5)
    logger.info(5.2)
    logger.info(CustomLogger("testObjectPrint"))
    logger.header_start("section")
    logger.header_end()
    logger.table([["n", "lambda"], [3, 4], [10, 17]])
    logger.table([])
    logger.set_level(CustomLogger.LEVEL_ERR)
    logger.info("hidden")
