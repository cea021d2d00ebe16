"""Exception hierarchy shared by all torifan modules."""


class TorifanError(Exception):
    """Base class; ``code`` is the stable name used in JSON error output."""

    code = "TorifanError"

    def to_json(self):
        return {"error": self.code, "message": str(self)}


class DependentGenerators(TorifanError):
    code = "DependentGenerators"


class ZeroVector(TorifanError):
    code = "ZeroVector"


class FanValidationError(TorifanError):
    code = "InvalidFan"

    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        kinds = sorted({d.kind for d in self.diagnostics})
        super().__init__(f"{len(self.diagnostics)} fan violation(s): {', '.join(kinds)}")

    def to_json(self):
        return {
            "error": self.code,
            "message": str(self),
            "diagnostics": [d.to_json() for d in self.diagnostics],
        }


class NotComplete(TorifanError):
    code = "NotComplete"


class ConeNotInFan(TorifanError):
    code = "ConeNotInFan"


class NotProjective(TorifanError):
    code = "NotProjective"


class RaysDoNotSpan(TorifanError):
    code = "RaysDoNotSpan"


class ZeroSubspace(TorifanError):
    code = "ZeroSubspace"


class UnknownName(TorifanError):
    code = "UnknownName"


class InconsistentSigns(TorifanError):
    code = "InconsistentSigns"
