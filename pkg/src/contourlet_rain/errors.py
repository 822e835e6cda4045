"""Exception types shared across the package.

Every error carries a short machine-readable ``code`` that the command-line
front end prints as a prefix.
"""


class ContourletRainError(Exception):
    code = "E_GENERIC"


class ConfigError(ContourletRainError, ValueError):
    code = "E_CONFIG"


class ShapeError(ContourletRainError, ValueError):
    code = "E_SHAPE"


class DomainError(ContourletRainError, ValueError):
    code = "E_DOMAIN"


class DecodeError(ContourletRainError, OSError):
    code = "E_DECODE"


class FormatError(ContourletRainError, ValueError):
    code = "E_FORMAT"


class ManifestError(ContourletRainError, OSError):
    code = "E_MANIFEST"


class DatasetError(ContourletRainError, ValueError):
    code = "E_DATASET"
