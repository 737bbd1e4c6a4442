"""voikit: information/performance frontiers for mean-square forecasting.

The package computes the closed-form RMSE(I) frontier for quadratic
objectives, estimates Gaussian mutual information from data, and benchmarks
forecasting models (least squares, SIMPLS partial least squares, a small
neural net) against the frontier through a rolling-window backtest.
"""

__version__ = "0.1.0"

from .backtest import (
    BacktestReport,
    SplitMetrics,
    SweepCell,
    WindowConfig,
    correlation,
    evaluate_split,
    frontier_overlay,
    mrr,
    run_sweep,
)
from .data import (
    LagDataset,
    PriceSeries,
    ReturnsPanel,
    RollingSplit,
    align_panel,
    lag_embed,
    load_prices,
    log_returns,
    rolling_splits,
)
from .errors import ConfigError, DataError, NumericalError, VoikitError
from .frontier import (
    EntropyNats,
    FrontierCurve,
    FrontierPoint,
    beta_of_info,
    frontier_curve,
    gaussian_entropy,
    info_at_beta,
    info_required_for_rmse,
    quadratic_log_partition,
    rmse_frontier_entropy,
    rmse_frontier_gaussian,
    utility_at_beta,
    utility_at_info,
    value_of_information,
)
from .hartley import HartleyEstimate, hartley_value_estimate
from .infotheory import (
    AcfSeries,
    CovMatrix,
    MIEstimate,
    acf,
    gaussian_entropy_from_sample,
    gaussian_mi,
    logdet_psd,
    nats_to_bits,
    sample_covariance,
)
from .models import (
    LinearModel,
    NeuralNet,
    PlsModel,
    TrainConfig,
    nn_fit,
    nn_gradient,
    nn_loss,
    ols_fit,
    predict,
    simpls_fit,
)
from .synth import SynthSpec, generate, population_mi_nats
