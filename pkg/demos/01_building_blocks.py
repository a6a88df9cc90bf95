"""
Building blocks: XXZ and D22 R- and K-matrices
==============================================

The 16x16 D22 R-matrix is available twice: typed in entry by entry, and
assembled from four XXZ R-matrices. We check that the two agree and that
the usual identities hold at a random point.
"""

import numpy as np

from d22chain import d22, xxz
from d22chain.d22 import D22Boundary
from d22chain.sampling import DEFAULT_BOUNDARY

eta = 0.37 + 0.1j
u, v = 0.41 - 0.8j, -0.27 + 1.3j

# the two constructions of the D22 R-matrix
res, diff = d22.r_direct_vs_factorized(u, eta)
print(f"direct vs factorized R:      {res:.2e}")

# Yang-Baxter for both R-matrices
print(f"Yang-Baxter, XXZ:            {xxz.ybe_residual(u, v, eta):.2e}")
print(f"Yang-Baxter, D22:            {d22.ybe_residual(u, v, eta):.2e}")

# unitarity and crossing unitarity (both transposition lines)
print(f"unitarity, D22:              {d22.unitarity_residual(u, eta):.2e}")
print("crossing, D22:               {:.2e} {:.2e}".format(*d22.crossing_residuals(u, eta)))

# the two classes of non-diagonal K-matrices, their reflection equations and
# their assembly from XXZ K-matrices
for cls in ("I", "II"):
    bnd = D22Boundary(cls, DEFAULT_BOUNDARY)
    rm = d22.reflection_minus_residual(u, v, eta, bnd)
    rp = d22.reflection_plus_residual(u, v, eta, bnd)
    kp, km = d22.k_factorization_check(u, eta, bnd)
    print(f"class {cls:>2}: reflection {rm:.1e} / {rp:.1e}, K from XXZ blocks {kp:.1e} / {km:.1e}")

# class II has a traceless K+ at u=0, which is why it has no simple Hamiltonian
for cls in ("I", "II"):
    kp0 = d22.k_plus_d22(0.0, eta, D22Boundary(cls, DEFAULT_BOUNDARY))
    print(f"class {cls:>2}: tr K+(0) = {np.trace(kp0):.3e}")
