"""Hybrid Bell-state measurement simulator (Python bindings)."""

from ._core import (
    ConfigError,
    DomainError,
    NumericalError,
    assemble_hbsm,
    assemble_hbsm_by_conjugation,
    asymptotic_purity,
    bernoulli_loss,
    closed_form_diag,
    find_crossover,
    hd_windowed,
    herald,
    herald_baseline,
    p_max,
    pnr_single_click,
    preset_names,
    preset_config,
    purity,
    run_sweep_csv,
    spd_on_off,
    swap,
    teleport,
)

__all__ = [name for name in dir() if not name.startswith("_")]
