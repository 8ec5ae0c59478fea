"""Tour of the closed-form thresholding operators.

The hierarchical subproblem  min_z 1/2||z-w||^2 + t2 ||z||_2 + t1 ||z||_1
is solved exactly by scalar soft thresholding followed by shrinking the
whole vector toward zero. Run this script to see how the two stages act
separately and together.
"""

import numpy as np

from hilasso import (
    ProxWeights,
    collab_hilasso_prox,
    hilasso_prox,
    scalar_soft_threshold,
    vector_soft_threshold,
)

w = np.array([3.0, -1.0, 0.5, 0.05])
print("input vector:            ", w)
print("scalar threshold (t=1):  ", scalar_soft_threshold(w, 1.0))
print("vector threshold (t=2.5):", vector_soft_threshold(w, 2.5))

z = hilasso_prox(w, ProxWeights(t1=1.0, t2=1.0))
print("hierarchical (1, 1):     ", z)
print("  -> small entries are zeroed by the l1 stage, the survivors are")
print("     then shrunk together by the group stage.")

# With a big group threshold the whole block dies at once.
print("hierarchical (1, 3):     ", hilasso_prox(w, ProxWeights(1.0, 3.0)))

# The collaborative version treats a group-by-signals block jointly: its
# Frobenius norm decides whether the whole group survives, while each
# signal keeps its own sparsity pattern inside.
W = np.array([[3.0, 0.0, 1.0],
              [0.0, 4.0, -0.2]])
print("\ncollaborative block:\n", W)
print("collaborative prox (t1=0.5, t2=2):\n",
      collab_hilasso_prox(W, ProxWeights(0.5, 2.0)))
