"""Metaverse service slicing simulator."""

from ._core import (
    Catalog,
    Error,
    IsolationDegree,
    MaaSModel,
    MIResult,
    ModelKind,
    Pool,
    QoEParams,
    ResourceVector,
    SweepRow,
    UserSession,
    __version__,
    allocation_objective,
    build_pool,
    design_cluster_capacity,
    even_allocation,
    exponential_moving_average,
    may_share,
    mean_mi,
    meta_immersion,
    mi_max_allocation,
    needs_readjustment,
    objective_quality,
    rendering_perception,
    run_scenario,
    run_sweep,
    sweep_csv,
    validate_scenario,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
