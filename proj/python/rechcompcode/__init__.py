"""Joint constellation and slot-repetition code design for computing over MACs.

Thin wrapper around the C++ core: design co-optimized modulations and
slot-activation codes, simulate the noisy multiple-access channel, and run
NMSE sweeps against the repetition and analog-aggregation baselines.
"""

from ._core import (
    decode,
    design,
    enumerate_table,
    lmin_bound,
    nmse,
    sigma_from_snr,
    simulate,
    snr_from_sigma,
    sweep_csv,
    sweep_rows,
    table1,
)

__version__ = "0.1.0"

__all__ = [
    "decode",
    "design",
    "enumerate_table",
    "lmin_bound",
    "nmse",
    "sigma_from_snr",
    "simulate",
    "snr_from_sigma",
    "sweep_csv",
    "sweep_rows",
    "table1",
    "__version__",
]
