"""depthlab: exact subalgebra-depth computations.

Submodules:
  scalars       exact rationals and cyclotomics
  exact_matrix  dense exact matrices, fraction-free elimination
  matrix_depth  depth of semisimple inclusions from inclusion matrices
  perm_group    finite permutation groups
  burnside      G-sets, Mackey products, Burnside depth bounds
  hopf_algebra  explicit Hopf algebras, quotient modules, module depth
  hochschild    relative cochain complexes on quotient-module tensor powers
  cli           command-line front end and the sequence-depth toy
"""

__version__ = "0.1.0"
