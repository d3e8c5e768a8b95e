"""Link matrices from partial transposes, and the qubit Pauli link.

For two qubits the realigned partial transpose is unitarily equivalent to
the real 4x4 matrix of Pauli correlations.
"""
import numpy as np

from luinv import bell_state, haar_random_pure, link_matrix, pauli_link_matrix, reduced_density, substream, u_matrix

np.set_printoptions(precision=4, suppress=True)

# Bell state: Pauli correlations are diag(1, 1, -1, 1) / 2
bell = bell_state()
print("Pauli link of the Bell state:\n", pauli_link_matrix(reduced_density(bell, [0, 1])))

# a random mixed two-qubit marginal of a three-qubit state
psi = haar_random_pure((2, 2, 2), substream(1))
rho = reduced_density(psi, [0, 1])
L = link_matrix(rho, 0, 1).mat
U = u_matrix()
S = pauli_link_matrix(rho)
print("max |S - U^dag L U| =", np.abs(S - U.conj().T @ L @ U).max())

# links between unequal dimensions are rectangular: d_to^2 x d_from^2
psi = haar_random_pure((3, 5), substream(2))
print("link 1 -> 2 shape:", link_matrix(psi, 0, 1).mat.shape)
