"""Hilbert projective metrics, base norms, channel contraction coefficients
and probabilistic-map synthesis over operator cones."""

__version__ = "0.1.0"

from .basenorms import MeasurementSet, base_norm, dist_norm, log_negativity, max_bias, negativity
from .channels import (
    Channel,
    best_diameter,
    birkhoff_coefficient,
    depolarizing,
    diameter_depolarizing,
    diameter_sampled,
    from_choi,
    from_kraus,
    to_choi,
)
from .cones import Cone, hilbert_distance, inf_ratio, oscillation, sup_ratio, sup_ratio_oracle
from .synthesis import complete_to_instrument, feasible, optimality_witness, synthesize

__all__ = [
    "MeasurementSet", "base_norm", "dist_norm", "log_negativity", "max_bias", "negativity",
    "Channel", "best_diameter", "birkhoff_coefficient", "depolarizing",
    "diameter_depolarizing", "diameter_sampled", "from_choi", "from_kraus", "to_choi",
    "Cone", "hilbert_distance", "inf_ratio", "oscillation", "sup_ratio", "sup_ratio_oracle",
    "complete_to_instrument", "feasible", "optimality_witness", "synthesize",
]
