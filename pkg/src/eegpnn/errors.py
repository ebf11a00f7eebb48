"""Exception hierarchy shared by the pipeline and the CLI exit-code map."""


class EEGPNNError(Exception):
    """Base class for all package errors."""


class ParseError(EEGPNNError, ValueError):
    """A segment, feature or model file could not be parsed."""

    def __init__(self, message, path=None, line=None):
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where = f"{path}"
            if line is not None:
                where += f":{line}"
            where += ": "
        super().__init__(where + message)


class ShapeError(EEGPNNError, ValueError):
    """Array lengths disagree (mixed segment lengths, wrong feature count)."""


class DomainError(EEGPNNError, ValueError):
    """An argument lies outside the domain an operation is defined on."""


class ConfigError(EEGPNNError):
    """An experiment or run configuration references data that is not there."""


class ModelMismatchError(EEGPNNError):
    """A saved model is incompatible with the vectors presented to it."""


class FeatureError(EEGPNNError):
    """Feature extraction failed; ``feature`` names the failing component."""

    def __init__(self, feature, source_id, cause):
        self.feature = feature
        self.source_id = source_id
        self.cause = cause
        super().__init__(f"feature '{feature}' failed on segment '{source_id}': {cause}")
