"""Certified numerics for the ranks of the torsion matrices T[a][b] = Li_{k+1}(zeta_n^(ab))."""

__version__ = "0.1.0"

from .balls import (  # noqa: E402
    ComplexBall,
    InconsistencyError,
    Precision,
    PrecisionError,
    RealBall,
)
from .bookkeeping import consistency_check, k_theory_rank, l_kn, rep_counts  # noqa: E402
from .characters import enumerate_characters  # noqa: E402
from .lfunctions import dirichlet_L, e_n_chi, nonzero_certify  # noqa: E402
from .modular import RootOfUnity, unit_group  # noqa: E402
from .polylog import hurwitz_zeta, polylog_root, real_polylog  # noqa: E402
from .torsion import build_T, certified_ranks, certify_T_invertible  # noqa: E402

__all__ = [
    "__version__",
    "ComplexBall",
    "InconsistencyError",
    "Precision",
    "PrecisionError",
    "RealBall",
    "RootOfUnity",
    "build_T",
    "certified_ranks",
    "certify_T_invertible",
    "consistency_check",
    "dirichlet_L",
    "e_n_chi",
    "enumerate_characters",
    "hurwitz_zeta",
    "k_theory_rank",
    "l_kn",
    "nonzero_certify",
    "polylog_root",
    "real_polylog",
    "rep_counts",
    "unit_group",
]
