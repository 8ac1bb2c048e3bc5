"""Exception hierarchy shared by the package."""


class BiphotonError(Exception):
    """Base class for all errors raised by this package."""


class CutoffExceeded(BiphotonError):
    """A creation operator would push the photon number past the cutoff."""


class DimensionMismatch(BiphotonError):
    """Two objects disagree on mode count or cutoff."""


class ZeroState(BiphotonError):
    """A state has (numerically) zero norm where a normalizable one is needed."""


class UnknownName(BiphotonError, KeyError):
    """A named state or mode is not part of the vocabulary."""

    def __str__(self) -> str:
        return str(self.args[0]) if self.args else ""


class AllArmsDark(BiphotonError):
    """Every arm of the source interferometer has zero pump amplitude."""


class NormalizationError(BiphotonError):
    """Loaded amplitudes are too far from unit norm."""


class ConfigError(BiphotonError):
    """Malformed experiment file or state literal."""
