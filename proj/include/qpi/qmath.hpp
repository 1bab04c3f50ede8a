#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "qpi/constants.hpp"

namespace qpi {

using cplx = std::complex<double>;
using cmat = Eigen::MatrixXcd;
using cvec = Eigen::VectorXcd;

// Pauli matrices and the identity.
const cmat& pauli_x();
const cmat& pauli_y();
const cmat& pauli_z();
cmat identity(int dim);

// sx*X + sy*Y + sz*Z
cmat pauli_dot(double sx, double sy, double sz);

bool is_hermitian(const cmat& m, double tol = kTol.elementwise);

// Throws std::invalid_argument unless `rho` is Hermitian with unit trace and
// eigenvalues >= -spectral tolerance.
void validate_density(const cmat& rho, double tol = kTol.elementwise);

// Eigenvalues of a Hermitian matrix, ascending, with tiny negatives in
// [-spectral, 0) clamped to zero.
Eigen::VectorXd hermitian_eigenvalues(const cmat& m);

// -p log2 p - (1-p) log2 (1-p), with the limit value 0 at p in {0, 1}.
// Throws std::domain_error outside [0, 1].
double binary_entropy(double p);

// Von Neumann entropy in bits of a validated density matrix.
double von_neumann_entropy(const cmat& rho);

// Entropy of an eigenvalue list (0 log 0 := 0); negatives within the
// spectral tolerance are clamped first.
double spectrum_entropy(const Eigen::VectorXd& eigs);

// Kronecker product.
cmat tensor(const cmat& a, const cmat& b);

// Traces out factor `traced` (0-based) of a state on a tensor product with
// the given factor dimensions. The remaining factors keep their order.
cmat partial_trace(const cmat& rho, int traced, const std::vector<int>& dims);

}  // namespace qpi
