"""Contourlet transform toolkit for rain-streak analysis.

Laplacian pyramid plus a frequency-wedge directional filter bank, synthetic
rain degradation, quality metrics, subband losses and the level /
extraction studies built on them.
"""

__version__ = "0.1.0"

from .contourlet import (
    AggregateComponent,
    ContourletDecomposition,
    CtConfig,
    aggregate_component,
    ct_forward,
    ct_inverse,
    deserialize_decomposition,
    multi_pool,
    serialize_decomposition,
)
from .errors import (
    ConfigError,
    ContourletRainError,
    DecodeError,
    DomainError,
    FormatError,
    ManifestError,
    ShapeError,
)
from .imagecore import load_image, save_image, to_lab, to_luma
