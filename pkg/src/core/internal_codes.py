from shared.base_internal_codes import InternalCodeBase


class InternalCodesRepulsion(InternalCodeBase):
    DOMAIN_ERROR          = 1000, "Input outside the operation's domain"
    GEOMETRY_ERROR        = 1001, "Constituent geometry violates containment or disjointness"
    SCHEDULE_ERROR        = 1002, "Repulsion schedule is not strictly increasing or has the wrong length"
    MEASURE_ERROR         = 1003, "Leaf measure is not a probability vector on the leaves"
    NUMERICAL_ERROR       = 1100, "Linear solve or factorization failed"
    CONVERGENCE_ERROR     = 1101, "Iteration cap reached before convergence"
    SEPARATION_ERROR      = 1200, "Point configuration violates the 2r separation"
    SAMPLING_ERROR        = 1201, "Separated sampler could not place every point"
    PARSE_ERROR           = 1300, "Malformed input file"
