"""Derivation of the frozen deuteron constants used in the tests.

Builds the 4x4 Hamiltonian from explicit Kronecker products (qubit 0 is the
right-most factor) and diagonalises it densely. Run directly to reprint:

    python tests/oracles/deuteron_oracle.py
"""
import numpy as np

I = np.eye(2)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]])
Z = np.diag([1.0, -1.0])


def matrix() -> np.ndarray:
    return (
        5.907 * np.kron(I, I)
        - 2.1433 * np.kron(X, X)
        - 2.1433 * np.kron(Y, Y)
        + 0.21829 * np.kron(I, Z)
        - 6.125 * np.kron(Z, I)
    )


def ground() -> tuple[float, float]:
    """Minimum eigenvalue and the ansatz angle reaching it.

    The ansatz prepares cos(t/2)|01> + sin(t/2)|10> (basis indices 1, 2).
    """
    w, v = np.linalg.eigh(matrix())
    vec = v[:, 0] * np.sign(v[1, 0].real)
    return float(w[0]), float(2 * np.arctan2(vec[2].real, vec[1].real))


if __name__ == "__main__":
    e, t = ground()
    print(f"GROUND_ENERGY = {e!r}")
    print(f"OPTIMAL_THETA = {t!r}")
