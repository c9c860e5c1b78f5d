"""Global constants for scatterlab."""

BOUNDARY_TOLERANCE = 1e-12  # points closer than this to the boundary are not "inside"
MIN_REFRACTIVE_INDEX = 1e-3  # n0: lower bound on n inside D

GRID_MARGIN_CELLS = 2
MAX_GRID_CELLS = 2**22
MIN_BOUNDARY_SAMPLES = 4

QUADRATURE_CHUNK_ENTRIES = 4_000_000  # point x cell pairs evaluated per block
HESSIAN_MIN_DISTANCE_CELLS = 2
HESSIAN_MIN_BOUNDARY_NODES = 256
BOUNDARY_NODES_PER_DISTANCE = 16  # nodes per unit of perimeter / distance^(m-1)

SOLVER_TOLERANCE = 1e-8
SOLVER_MAX_ITERATIONS = 10_000
SOLVER_RESTART = 100
MIN_CELLS_PER_WAVELENGTH = 10

MIN_FARFIELD_DIRECTIONS_2D = 16
MIN_FARFIELD_DIRECTIONS_3D = 50
DEFAULT_FARFIELD_DIRECTIONS = 64

HERGLOTZ_MIN_NODES = 64
HERGLOTZ_NODES_PER_KR = 8
STATIONARY_PHASE_MIN_NODES = 256

JUMP_DIVERGENCE_FACTOR = 3.0
JUMP_GROWTH_FACTOR = 1.5
ETA_TO_SPACING_RATIO = 4  # smallest probe offset must be at least this many cells

WORKERS_ENV_VAR = "SCATTERLAB_WORKERS"

RADIAL_RHO_THRESHOLD = 1e-2  # ρ at a radial root counted as non-scattering
RADIAL_DIP_FACTOR = 10.0
SOURCE_SUPPRESSION_FACTOR = 100.0  # bump far field below the same-norm indicator's
APPENDIX_SAMPLES = 100_000

EXIT_SUCCESS = 0
EXIT_VALIDATION = 2
EXIT_TRUNCATED = 3
EXIT_SOLVER_FAILURE = 4
