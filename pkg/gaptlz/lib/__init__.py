from .expr import ScalarField, is_inf, parse_scalar, to_mp, to_mpf
from .util import get, remove_empty_values, split_list
