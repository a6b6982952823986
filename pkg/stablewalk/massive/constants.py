#: Exact step pmf is tabulated for k <= DEFAULT_TRUNCATION
DEFAULT_TRUNCATION = 2 ** 16

#: Truncation used for single kernel evaluations p_alpha(n, x)
KERNEL_TRUNCATION = 2 ** 12

#: Differences with sup norm at or above this radius use the asymptotic formula
FAR_FIELD_RADIUS = 512

#: Largest set handed to the dense equilibrium solver
SOLVER_CAP = 4096

#: Largest bounding box (in lattice cells) for FFT row sums
FFT_CELL_LIMIT = 2 ** 23

#: Default dyadic shell range for the Wiener test
SHELL_RANGE = (4, 24)

#: Upper end of the Piatetski-Shapiro parameter range
PIATETSKI_BETA_MAX = 2817 / 2426

#: Envelope fit thresholds
FIT_RATE_TOLERANCE = 0.02
FIT_EXPONENT_MARGIN = 0.1

#: Largest value accepted by the segmented sieve
SIEVE_LIMIT = 2 ** 40

#: Monte Carlo paths sharing one random stream
SIMULATION_BLOCK = 1024

#: Default Wilson interval quantile (95%)
WILSON_Z = 1.959963984540054

CONF_FILENAME = "massive.config.yaml"
RESOLVED_CONF_FILENAME = "config.yaml"

SCHEMA_VERSION = 1

CACHE_DIRNAME = "stablewalk-massive"
