"""Dense reference implementations used to cross-check the matrix-free solver."""

import numpy as np

from branchcs.admm import AdmmState, soft_threshold
from branchcs.grid import MeasurementSet


def dense_u_solve(ms: MeasurementSet, beta: float, z: np.ndarray,
                  y: np.ndarray) -> np.ndarray:
    """Explicit Kronecker normal-equation solve for the U-subproblem.

    Builds A = (rows J of conj(F)/N) so that the sampled measurement operator
    is vec(B) = (A kron A) vec(U) with column-stacked vec, then solves

        (N^2 A~^H A~ + beta I) u~ = N^2 A~^H b~ + beta z~ - y~.

    O(N^4) memory and O(N^6) flops; only usable at toy sizes.
    """
    n = ms.n
    grid = np.arange(n)
    f_std = np.exp(-2j * np.pi * np.outer(grid, grid) / n)
    g1 = np.conj(f_std) / n
    a = g1[np.asarray(ms.indices, dtype=int), :]
    a_big = np.kron(a, a)
    lhs = n**2 * (a_big.conj().T @ a_big) + beta * np.eye(n * n)
    rhs = (n**2 * (a_big.conj().T @ ms.b.flatten(order="F"))
           + beta * z.flatten(order="F") - y.flatten(order="F"))
    u = np.linalg.solve(lhs, rhs)
    return u.reshape(n, n, order="F")


def dense_sweep(ms: MeasurementSet, beta: float, lam: float,
                state: AdmmState) -> AdmmState:
    """One full ADMM sweep using the dense U-solve; mirrors admm.iterate."""
    u_new = dense_u_solve(ms, beta, state.z, state.y)
    z_new = soft_threshold(u_new + state.y / beta, lam / beta)
    y_new = state.y + beta * (u_new - z_new)
    return AdmmState(u=u_new, z=z_new, y=y_new, k=state.k + 1)
