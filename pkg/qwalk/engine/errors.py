class QwalkError(Exception):
    pass


class StructuralError(QwalkError):
    pass


class ConnectivityError(QwalkError):
    pass


class InvalidInvolution(QwalkError):
    pass


class DomainError(QwalkError):
    pass


class PreconditionError(QwalkError):
    pass


class DivergenceError(PreconditionError):
    pass


class NumericError(QwalkError):
    pass


class SizeError(QwalkError):
    pass
