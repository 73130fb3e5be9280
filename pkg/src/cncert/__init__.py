"""cncert: exact Nullstellensatz-style certificates for subgraph isomorphism.

Layers, bottom up:

- ratio / cyclotomic: exact rationals and the cyclotomic fields Q(w_n)
- polynomials:        sparse multivariate polynomials with cyclic exponents
- nullstellensatz:    generic vanishing certificates and nonzero witnesses
- graphs:             digraphs, permutations, adjacency polynomial codecs
- primal:             constraint polynomial, automorphism quotient, primal
                      certificates and the coset product criterion
- dual:               forbidden-family products certifying non-existence
- galois:             integral Galois resolvents and stabilizer witnesses
- cli:                command-line front end emitting JSON reports
"""

from .ratio import Q, RATIO_BACKEND, rational
from .cyclotomic import (
    CycMatrix,
    CycVector,
    CyclotomicContext,
    CyclotomicNumber,
    bilinear_form,
    dft_matrix,
    hadamard,
    hadamard_power,
    make_context,
    root_power,
    root_vector,
)
from .polynomials import (
    GridEvaluator,
    GridSpec,
    Polynomial,
    VariableSpace,
    divide_by_grid,
    grid_interpolate,
    grid_polynomial,
    grid_samples,
    support_maximal,
    variable_space,
)
from .termops import KERNEL_BACKEND

__version__ = "0.1.0"
