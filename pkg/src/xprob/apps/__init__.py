"""End-to-end pipelines: species sampling and the opinion-dynamics boomerang."""
from .opinion import BoomerangResult, EpsilonSchedule, OpinionConfig, influence, influence_step, run_boomerang
from .species import IntervalRow, IntervalTable, SpeciesConfig, SpeciesResult, geometric_oracle, run_species

__all__ = [
    "BoomerangResult",
    "EpsilonSchedule",
    "IntervalRow",
    "IntervalTable",
    "OpinionConfig",
    "SpeciesConfig",
    "SpeciesResult",
    "geometric_oracle",
    "influence",
    "influence_step",
    "run_boomerang",
    "run_species",
]
