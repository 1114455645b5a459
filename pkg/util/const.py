"""Contains constants used application-wide"""
from fractions import Fraction

DATABASE_FILEPATH = "experiments.db"
CONFIG_FILEPATH = "config.ini"
SVG_DIRECTORY = "figures"

RECORDS_ENTRY_LIMIT = 500

# generators
DEFAULT_COORDINATE_RANGE = 50
DEFAULT_MAX_RETRIES = 64
DEFAULT_PERTURBATION_DENOMINATOR = 1000

# oracles
DEFAULT_BRUTE_FORCE_FAMILY_LIMIT = 20
DEFAULT_EXHAUSTIVE_PATH_LINES = 5

# generic_shear tries t = 1/k for k = 1 .. SHEAR_MAX_K
SHEAR_MAX_K = 10_000

# open-region searches halve their offset at most this many times
WEDGE_SEARCH_MAX_HALVINGS = 256

# line perturbation for points_to_path: magnitude 1/k, k doubling
PERTURBATION_MAX_ATTEMPTS = 48

# three-ray construction: rational stand-ins for rays 120 degrees apart
# (sqrt(3)/2 ~ 7/8, skewed by 1/16 so that rays 2 and 3 differ in x)
THREE_RAY_DIRECTIONS = (
    (Fraction(1), Fraction(0)),
    (Fraction(-7, 16), Fraction(7, 8)),
    (Fraction(-9, 16), Fraction(-7, 8)),
)
THREE_RAY_PERTURBATION_FACTOR = 16

# display only
SVG_MARGIN = 1.0
SVG_FIGURE_SIZE = (6.0, 6.0)
SVG_HASH_SALT = "separable-antichains"
