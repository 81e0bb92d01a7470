from typing import Optional


class PhotodetectError(Exception):
    """Base class for every error raised by the simulator"""

    exit_code = 2

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message

    def to_dict(self) -> dict:
        return {"type": type(self).__name__, "message": self.message}


class ConfigError(PhotodetectError, ValueError):
    """Run configuration failed validation"""

    def __init__(self, message: str, field: Optional[str] = None):
        super().__init__(message)
        self.field = field

    def to_dict(self) -> dict:
        data = super().to_dict()
        if self.field is not None:
            data["field"] = self.field
        return data


class GeometryError(PhotodetectError, ValueError):
    pass


class DetectorError(PhotodetectError, ValueError):
    pass


class OracleError(PhotodetectError, ValueError):
    pass


class AnalysisError(PhotodetectError, ValueError):
    pass


class ExportError(PhotodetectError):
    exit_code = 3
