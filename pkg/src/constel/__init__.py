"""Prime constellation counting and Hardy-Littlewood density analysis.

The package counts occurrences of prime k-tuple patterns up to large bounds
with a segmented sieve, evaluates truncated Hardy-Littlewood products and
logarithmic-integral densities, and compares measured proportionality
factors against their conjectured closed forms.
"""

from .analysis import (HLConstant, LogIntegralValue, PdfEstimate,
                       conjectured_pdf, estimate_pdf, gap_pdf, hl_constant,
                       hl_constants, log_integral, log_integral_between,
                       ratio_to_hl, rational_candidates, result_record)
from .counter import (ConstellationCount, CountJob, count_in_segment,
                      count_up_to)
from .errors import (ConstelError, DomainError, IntegrityError,
                     LookaheadError, ResourceError, VerificationError)
from .kernels import BACKEND
from .patterns import (OffsetPattern, PatternClassification,
                       basic_pattern_for, classify, is_admissible, is_basic,
                       is_smooth)
from .sieve import (PrimeSegment, RangeBounds, count_primes, iter_prime_chunks,
                    primes_in_range, primes_up_to)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "ConstelError",
    "ConstellationCount",
    "CountJob",
    "DomainError",
    "HLConstant",
    "IntegrityError",
    "LogIntegralValue",
    "LookaheadError",
    "OffsetPattern",
    "PatternClassification",
    "PdfEstimate",
    "PrimeSegment",
    "RangeBounds",
    "ResourceError",
    "VerificationError",
    "basic_pattern_for",
    "classify",
    "conjectured_pdf",
    "count_in_segment",
    "count_primes",
    "count_up_to",
    "estimate_pdf",
    "gap_pdf",
    "hl_constant",
    "hl_constants",
    "is_admissible",
    "is_basic",
    "is_smooth",
    "iter_prime_chunks",
    "log_integral",
    "log_integral_between",
    "primes_in_range",
    "primes_up_to",
    "ratio_to_hl",
    "rational_candidates",
    "result_record",
]
