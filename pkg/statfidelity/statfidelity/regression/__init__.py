from statfidelity.regression.design import build_design
from statfidelity.regression.multinomial import (coefficient_table, fit_design, fit_model_family, fit_multinomial,
                                                 information_matrix, log_likelihood, lr_test, score)
from statfidelity.regression.effects import effect_display, predict_proba

__all__ = [
    "build_design",
    "coefficient_table",
    "fit_design",
    "fit_model_family",
    "fit_multinomial",
    "information_matrix",
    "log_likelihood",
    "lr_test",
    "score",
    "effect_display",
    "predict_proba",
]
