"""Seasonal-trend-dispersion decomposition of time series."""
from .baseline import ClassicalComponents, Mode, classical_decompose, moving_average_trend
from .core import (
    SeasonalGrid,
    StdComponents,
    StdrComponents,
    TimeSeries,
    Variant,
    average_seasonal_pattern,
    cycle_diversity,
    cycle_mean,
    decompose_std,
    decompose_stdr,
    dispersion_component,
    reconstruct,
    seasonal_component,
    split_cycles,
    trend_component,
)
from .diagnostics import (
    Conclusion,
    acf,
    adf_test,
    kpss_test,
    pacf,
    pp_test,
    remainder_ratio,
    stationarity_report,
)
from .generators import MackeyGlassConfig, gen_mackey_glass, gen_test_process
from .io import load_airline, read_csv, read_components, write_components
from .patterns import (
    build_dataset,
    decode_forecast,
    encode_input_patterns,
    encode_output_patterns,
    evaluate_forecast,
    holdout_forecast,
    knn_forecast,
)

__version__ = "0.1.0"
