"""qcong: exact q-series arithmetic and coefficient-divisibility verification
for modular functions at level 1, the genus-zero prime levels, and the
genus-one levels."""

from .bases import (BasisTable, Level1Harmonic, build_genus0_basis,
                    build_j_basis, hauptmodul, hecke_t, j_coefficient,
                    pplication_residual)
from .congruences import SUITES, CongruenceReport, mock_combination, run_suite
from .errors import (AmbiguousModelError, EigenformSanityError,
                     FractionalValuationError, InconsistentModelError,
                     LevelUnavailableError, NoModelFoundError,
                     NonIntegralError, NonUnitLeadingError,
                     NotCoprimeError, PrecisionExceededError, QcongError,
                     SeedMissingError, ZeroPivotError)
from .forms import (DivisorSumTable, EtaQuotientSpec, delta_series,
                    eisenstein, eta_quotient, euler_series, j_series,
                    partition, partition_series, sigma, tau)
from .genus1 import (GENUS1_LEVELS, GeneratorPair, WeierstrassModel,
                     build_genus1_basis, find_model, newform_series,
                     solve_xy, witness_series)
from .series import LaurentSeries, from_terms, monomial, one, zero

__version__ = "0.1.0"
