"""Formation detection and position labelling from football tracking data."""

__version__ = "0.1.0"

from .lsa import Assignment, solve
from .matcher import MatchResult, TeamObservation, fit_template, match, match_restricted, scale_positions
from .pipeline import detect
from .segmentation import FrameRecord, Segment, mean_position, resolve_substitutions, segment
from .stability import stabilize
from .templates import FormationTemplate, TemplateBounds, bounds, default_registry, filter_by_count, load_registry

__all__ = [
    "Assignment", "FormationTemplate", "FrameRecord", "MatchResult", "Segment", "TeamObservation",
    "TemplateBounds", "bounds", "default_registry", "detect", "filter_by_count", "fit_template",
    "load_registry", "match", "match_restricted", "mean_position", "resolve_substitutions",
    "scale_positions", "segment", "solve", "stabilize",
]
