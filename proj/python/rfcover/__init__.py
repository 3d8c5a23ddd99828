"""Coverage-map classification with random Fourier features."""

from ._rfcover import (
    BenchConfig,
    BinaryModel,
    Dataset,
    FeatureSet,
    KernelKind,
    Label,
    Method,
    ScenarioConfig,
    TrainOptions,
    TrainedModel,
    approximate_kernel,
    ddrf_pipeline,
    evaluate,
    generate_scenario,
    gram_matrix,
    kernel_value,
    load_config,
    run_benchmark,
    sample_features,
    sample_orf_features,
    score_pool,
    select_top,
    sigma_heuristic,
    train_binary,
    train_method,
    transform,
)

__all__ = [name for name in dir() if not name.startswith("_")]
