from statfidelity.kernel.special import (regularized_incomplete_beta, regularized_incomplete_gamma_lower,
                                         regularized_incomplete_gamma_upper)
from statfidelity.kernel.distributions import (chi_square_upper_tail, f_upper_tail, normal_two_tailed,
                                               p_from_statistic, p_interval, pearson_r_two_tailed,
                                               student_t_two_tailed)

__all__ = [
    "regularized_incomplete_beta",
    "regularized_incomplete_gamma_lower",
    "regularized_incomplete_gamma_upper",
    "chi_square_upper_tail",
    "f_upper_tail",
    "normal_two_tailed",
    "p_from_statistic",
    "p_interval",
    "pearson_r_two_tailed",
    "student_t_two_tailed",
]
