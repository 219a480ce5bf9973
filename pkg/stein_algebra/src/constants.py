from sympy import Rational

# extended-precision layer constants:
DEFAULT_PRECISION_DIGITS = 30
MIN_PRECISION_DIGITS = 30
DEFAULT_RELATIVE_TOLERANCE = 1e-9
DEFAULT_PROBE_POINTS = (Rational(1, 2), Rational(1), Rational(7, 3), Rational(4))

# environment variables read by config.load_settings:
PRECISION_ENV_VAR = "STEIN_PRECISION_DIGITS"
LOG_LEVEL_ENV_VAR = "STEIN_LOG_LEVEL"
N_JOBS_ENV_VAR = "STEIN_N_JOBS"

# CLI exit codes:
EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VERIFICATION_FAILED = 2

DEFAULT_KMAX = 12

# Meijer-G order selection rules:
G_ORDER_BY_SUPPORT = "support"
G_ORDER_ALL_LOWER = "all_lower"

SUPPORT_POSITIVE = "positive"
SUPPORT_SYMMETRIC = "symmetric"

# atom kinds and the names of their parameters, in the order they are written in expressions:
ATOM_PARAMETERS = {
    "Normal": ("mu", "sigma2"),
    "Gamma": ("r", "lambda"),
    "Beta": ("a", "b"),
    "StudentT": ("nu",),
    "InverseGamma": ("alpha", "beta"),
    "FDist": ("d1", "d2"),
    "PRR": ("s",),
    "VGSym": ("r", "sigma"),
    "VG": ("r", "theta", "sigma"),
    "GenGamma": ("r", "lambda", "q"),
    "Exponential": ("lambda",),
    "ChiSq": ("d",),
}

# atoms supported on (0, inf):
POSITIVE_ATOMS = {"Gamma", "Beta", "InverseGamma", "FDist", "PRR", "GenGamma", "Exponential", "ChiSq"}

# atoms that may be shifted (all gamma laws):
SHIFTABLE_ATOMS = {"Gamma", "Exponential", "ChiSq"}

# construction rule names, as they appear in traces:
RULE_ATOM = "atom"
RULE_SHIFT_GAMMA = "shifted_gamma"
RULE_SCALE = "scale"
RULE_POWER = "power"
RULE_INVERSE = "inverse"
RULE_PRODUCT = "product"
RULE_PROP314 = "prop314"
RULE_NONCENTERED_NORMAL = "noncentered_normal"
RULE_SUM_IID = "sum_iid"
RULE_REDUCE = "reduce"
