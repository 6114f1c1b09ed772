#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "chainwalk/numerics.hpp"
#include "chainwalk/scalar_walk.hpp"

namespace chainwalk {

/// Couplings of the nearest-neighbour chain Hamiltonian: lambda and chi have
/// length d-1, mu has length d (hbar = 1 throughout).
struct HamiltonianParams {
    std::vector<double> lambda;
    std::vector<double> chi;
    std::vector<double> mu;

    std::size_t sites() const { return mu.size(); }
    void validate() const;
};

/// Parse {"lambda":[...], "chi":[...], "mu":[...]}.
HamiltonianParams params_from_json(const std::string &text);

/// Amplitudes over the 2^d computational basis states of a qubit register.
/// Qubit 0 is the most significant bit of the basis index everywhere in this
/// codebase, so at d=4 the string |0010> is index 2.
struct QubitState {
    std::size_t d = 0;
    ComplexVector amplitudes;

    static QubitState basis(std::size_t d, std::size_t index);
};

/// Full 2^d x 2^d chain Hamiltonian, assembled from Pauli strings.
/// Desk-scale oracle: throws ScaleError above d = 14.
ComplexMatrix build_hamiltonian(const HamiltonianParams &p);

/// Diagonal operator counting 1-bits of the basis string (sigma_z |0> = +|0>).
ComplexMatrix number_operator(std::size_t d);

/// Entrywise max norm of ab - ba.
double commutator_norm(const ComplexMatrix &a, const ComplexMatrix &b);

/// The d x d single-excitation block of the Hamiltonian: tridiagonal with
/// h[k][k+1] = lambda_k + i chi_k and diagonal sum(mu) - 2 mu_k. The sign of
/// the imaginary part is pinned against the Kronecker-built full Hamiltonian
/// in a regression test.
ComplexMatrix restricted_hamiltonian_block(const HamiltonianParams &p);

/// Node k -> basis string with the single 1 at qubit k (index 2^(d-1-k)).
QubitState embed(const ChainState &state);

/// Inverse of embed. Throws SectorLeakError when more than `tol` of the norm
/// lives outside the single-excitation sector.
ChainState project(const QubitState &state, double tol = 1e-10);

/// Norm of the component outside the single-excitation sector.
double sector_leakage(const QubitState &state);

}  // namespace chainwalk
