"""Truthful and ordinal mechanisms for metric matching, clustering,
densest subgraph and Max TSP, with exact oracles and audit tooling."""

from .core import (Clustering, Matching, MetricInstance, NodeSubset, Path, Tour,
                   agent_utility, social_welfare, validate_instance)
from .ordinal import PreferenceProfile, find_undominated_edge, induce_preferences
from .randomness import RandomSource

__all__ = [
    "Clustering", "Matching", "MetricInstance", "NodeSubset", "Path", "Tour",
    "PreferenceProfile", "RandomSource", "agent_utility", "find_undominated_edge",
    "induce_preferences", "social_welfare", "validate_instance",
]
