"""Exact joint distribution and moments of inversion number and major index on words."""

__version__ = "0.1.0"

from .core import (
    Composition,
    EnumerationCapExceeded,
    Word,
    brute_force_joint,
    descent_set,
    enumerate_words,
    inversion_number,
    major_index,
    multinomial,
)
from .foata import foata_inverse, foata_transform
from .gaussian import (
    GaussianSpec,
    d2_closed_form,
    isserlis_moment,
    recurrence_moment,
    standardized_moment,
)
from .genpoly import (
    JointPolynomial,
    UniPolynomial,
    joint_gf,
    joint_gf_by_ending,
    marginal,
    q_multinomial,
)
from .moments import (
    MomentTable,
    ResourceBudgetExceeded,
    asymptotic_correlation,
    asymptotic_covariance,
    asymptotic_variance,
    central_moments,
    centralize,
    class_mean,
    class_moments,
    fm_recurrence_residual,
    mean,
    raw_moment_jets,
    to_factorial,
)
