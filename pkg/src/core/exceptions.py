from core.internal_codes import InternalCodesRepulsion
from shared.base_exceptions import BaseRepulsionException
from shared.base_internal_codes import CommonInternalCode


class DomainException(BaseRepulsionException):
    GENERAL_ERROR_CODE = InternalCodesRepulsion.DOMAIN_ERROR
    GENERAL_EXIT_CODE = 2


class GeometryException(DomainException):
    GENERAL_ERROR_CODE = InternalCodesRepulsion.GEOMETRY_ERROR


class SeparationException(DomainException):
    GENERAL_ERROR_CODE = InternalCodesRepulsion.SEPARATION_ERROR


class NumericalException(BaseRepulsionException):
    GENERAL_ERROR_CODE = InternalCodesRepulsion.NUMERICAL_ERROR
    GENERAL_EXIT_CODE = 3


class ConvergenceException(NumericalException):
    GENERAL_ERROR_CODE = InternalCodesRepulsion.CONVERGENCE_ERROR


class SamplingException(BaseRepulsionException):
    GENERAL_ERROR_CODE = InternalCodesRepulsion.SAMPLING_ERROR
    GENERAL_EXIT_CODE = 3


class ParseException(BaseRepulsionException):
    GENERAL_ERROR_CODE = InternalCodesRepulsion.PARSE_ERROR
    GENERAL_EXIT_CODE = 4


class StorageException(BaseRepulsionException):
    GENERAL_ERROR_CODE = CommonInternalCode.IO_ERROR
    GENERAL_EXIT_CODE = 5
