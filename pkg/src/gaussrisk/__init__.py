"""Closed-form systemic-risk statistics for a Gaussian bank-vs-system model.

A bivariate Gaussian model of one bank against the rest of the banking
system yields closed forms for CoVaR-style conditional VaR statistics, the
stressed-minus-unstressed differences built from them, the expected-
shortfall spillover, and the Euler VaR contribution.  The package bundles
the closed forms (:mod:`gaussrisk.measures`), moment estimation from return
panels (:mod:`gaussrisk.estimation`), a seeded Monte Carlo oracle that
verifies every formula by simulation (:mod:`gaussrisk.mc`), and a reporting
CLI (:mod:`gaussrisk.cli`).
"""

from .errors import (
    ConsistencyError,
    DegenerateBankError,
    DegenerateModelError,
    DegenerateSeriesWarning,
    DegenerateSystemError,
    DomainError,
    GaussRiskError,
    InvalidCovarianceError,
    PanelFormatError,
    ThinBandError,
    ThinTailError,
    UnknownBankError,
)
from .estimation import (
    MomentEstimate,
    ReturnPanel,
    estimate_moments,
    load_panel,
    pair_for_bank,
)
from .measures import (
    BankRiskReport,
    GaussianPair,
    SystemView,
    beta_coefficient,
    covar_at_mean,
    covar_collateral,
    delta_coll_es,
    delta_coll_var,
    delta_cond_var,
    delta_contr_var,
    full_report,
    std_allocation,
    to_system_view,
    var_contribution,
)
from .mc import (
    McConfig,
    StatisticCheck,
    ValidationReport,
    empirical_conditional_var,
    empirical_es,
    empirical_quantile,
    sample_pair,
    validate_closed_forms,
)
from .normal import (
    ConditionalMoments,
    RiskParams,
    conditional_moments,
    es_mean_normal,
    std_normal_cdf,
    std_normal_pdf,
    std_normal_quantile,
    var_normal,
)

__version__ = "0.1.0"
