from decouple import config

LOG_LEVEL: str = config("LOG_LEVEL", default="INFO")

# Default upper index of every certificate run when --verify-n is not given.
DEFAULT_VERIFY_N: int = config("DEFAULT_VERIFY_N", cast=int, default=12)

# Extra indices checked by substitution after an operator has been reconstructed.
EIGEN_VERIFY_EXTRA: int = config("EIGEN_VERIFY_EXTRA", cast=int, default=15)
EIGEN_BUILD_SLACK: int = config("EIGEN_BUILD_SLACK", cast=int, default=5)

PROBE_MAX_CANDIDATE_DIM: int = config("PROBE_MAX_CANDIDATE_DIM", cast=int, default=8)
PROBE_DEFAULT_DEGREE_MARGIN: int = config("PROBE_DEFAULT_DEGREE_MARGIN", cast=int, default=1)

# Sylvester determinants over multivariate rings blow up quickly past this size.
SYMBOLIC_MAX_K: int = config("SYMBOLIC_MAX_K", cast=int, default=4)
GENERICITY_SYMBOLIC_MAX_K: int = config("GENERICITY_SYMBOLIC_MAX_K", cast=int, default=2)

PROPERTY_TRIALS: int = config("PROPERTY_TRIALS", cast=int, default=50)
DEFAULT_SEED: int = config("DEFAULT_SEED", cast=int, default=0)
