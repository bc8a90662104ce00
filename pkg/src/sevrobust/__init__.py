"""Robust and likelihood-based Pareto I severity fitting for insurance payments."""

from .asymptotics import AsymptoticSpec, are, avar, i_t, i_w, j_t, j_w
from .distributions import ParetoI, pareto_cdf, pareto_pdf, pareto_qf
from .errors import (CaseError, ConfigError, DataError, DegenerateError, DomainError,
                     FeasibilityError, InfiniteQuantileError, NonIdentifiableError,
                     SeverityError, SolverError)
from .estimators import (FitResult, PaymentSample, Status, fit, fit_with_estimated_thresholds,
                         mle_payment_y, mle_payment_z, t_estimator_payment_y,
                         t_estimator_payment_y_case2, t_estimator_payment_z,
                         w_estimator_payment_y, w_estimator_payment_z)
from .inference import (ConfidenceInterval, GofReport, bootstrap_pvalue, ci_normal,
                        ks_right_censored, ks_statistic)
from .moments import TrimSpec
from .pricing import Layer, premium, premium_ci, premium_derivative
from .transforms import PolicyTerms, payment_y_dist, payment_z_dist, sample

__version__ = "0.1.0"
