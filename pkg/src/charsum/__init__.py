"""Empirical laboratory for shifted character sums with multiplicative
coefficients: character arithmetic mod a prime, multiplicative-function
tables, the smooth/rough decomposition, and the bound comparisons.
"""

from ._backend import BACKEND_NAME, HAVE_COMPILED
from .decomposition import (BrPartition, DiagnosticsReport, SmoothCounts,
                            SmoothnessParams, br_product_identity_check,
                            classify, diagnostics, dyadic_blocks,
                            lemma1_report, make_params, partition,
                            smooth_counts)
from .dirichlet import (CharTable, DirichletChar, build_char_table, char_eval,
                        char_eval_ratio, legendre_char)
from .errors import (CapacityError, CharsumError, HypothesisError, RegimeError)
from .harness import ExperimentConfig, run_sweep, selftest
from .multfunc import (MultFuncSpec, MultFuncTable, build_spf_sieve,
                       build_table, verify_multiplicativity)
from .primefield import (Modulus, factorize, find_primitive_root, is_prime,
                         mod_inv, mod_mul, mod_pow)
from .sums import (RationalSumReport, SumReport, multi_rational_char_sum,
                   multi_shifted_sum, rational_char_sum, shifted_sum,
                   theorem_bound, weil_complete_sum)

__version__ = "0.1.0"
