"""Transportation distances of Levy measures against the Cauchy reference ``dv/v**2``."""

__version__ = "0.1.0"

from .distance import (  # noqa: E402
    DistanceResult,
    distance,
    normalize,
    power_pair_integral,
    t1_empirical_vs_pareto,
    t1_pareto_pair,
    t2_gamma_pair,
    tp_pareto_pair,
    tp_quadrature,
    truncation_mass,
)
from .errors import (  # noqa: E402
    BlowUpError,
    CouplingError,
    DivergenceError,
    IncompleteInputError,
    LevyTransportError,
    UnsupportedComparisonError,
    ValidationError,
)
from .measures import (  # noqa: E402
    Empirical,
    GammaMeasure,
    GenericTail,
    ParetoTail,
    TransportFunction,
    TwoSidedPowerLaw,
    transport,
    transport_empirical,
    transport_from_tail,
    transport_pareto,
    two_sided_transport,
)
from .sampling import RngStream, empirical_from_sample, sample_pareto  # noqa: E402
