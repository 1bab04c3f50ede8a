#include "qpi/qmath.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <thread>

namespace qpi {

int worker_threads() {
  static const int cached = [] {
    if (const char* env = std::getenv("QKDD_THREADS")) {
      int n = std::atoi(env);
      if (n >= 1) return n;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
  }();
  return cached;
}

const cmat& pauli_x() {
  static const cmat m = (cmat(2, 2) << 0, 1, 1, 0).finished();
  return m;
}

const cmat& pauli_y() {
  static const cmat m =
      (cmat(2, 2) << 0, cplx(0, -1), cplx(0, 1), 0).finished();
  return m;
}

const cmat& pauli_z() {
  static const cmat m = (cmat(2, 2) << 1, 0, 0, -1).finished();
  return m;
}

cmat identity(int dim) { return cmat::Identity(dim, dim); }

cmat pauli_dot(double sx, double sy, double sz) {
  return sx * pauli_x() + sy * pauli_y() + sz * pauli_z();
}

bool is_hermitian(const cmat& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

void validate_density(const cmat& rho, double tol) {
  if (rho.rows() != rho.cols())
    throw std::invalid_argument("density matrix must be square");
  if (!is_hermitian(rho, tol))
    throw std::invalid_argument("density matrix must be Hermitian");
  if (std::abs(rho.trace() - cplx(1.0, 0.0)) > tol)
    throw std::invalid_argument("density matrix must have unit trace");
  Eigen::SelfAdjointEigenSolver<cmat> es(rho, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -kTol.spectral)
    throw std::invalid_argument("density matrix must be positive semidefinite");
}

Eigen::VectorXd hermitian_eigenvalues(const cmat& m) {
  Eigen::SelfAdjointEigenSolver<cmat> es(m, Eigen::EigenvaluesOnly);
  Eigen::VectorXd eigs = es.eigenvalues();
  for (int i = 0; i < eigs.size(); ++i) {
    if (eigs[i] < 0.0 && eigs[i] >= -kTol.spectral) eigs[i] = 0.0;
  }
  return eigs;
}

double binary_entropy(double p) {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::domain_error("binary_entropy: p must lie in [0, 1], got " +
                            std::to_string(p));
  if (p == 0.0 || p == 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

double spectrum_entropy(const Eigen::VectorXd& eigs) {
  double s = 0.0;
  for (int i = 0; i < eigs.size(); ++i) {
    double lam = eigs[i];
    if (lam < 0.0 && lam >= -kTol.spectral) lam = 0.0;
    if (lam > 0.0) s -= lam * std::log2(lam);
  }
  return s;
}

double von_neumann_entropy(const cmat& rho) {
  validate_density(rho);
  return spectrum_entropy(hermitian_eigenvalues(rho));
}

cmat tensor(const cmat& a, const cmat& b) {
  cmat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

cmat partial_trace(const cmat& rho, int traced, const std::vector<int>& dims) {
  int total = 1;
  for (int d : dims) {
    if (d <= 0) throw std::invalid_argument("partial_trace: bad factor dim");
    total *= d;
  }
  if (rho.rows() != total || rho.cols() != total)
    throw std::invalid_argument(
        "partial_trace: factor dims do not multiply to the matrix dim");
  if (traced < 0 || traced >= static_cast<int>(dims.size()))
    throw std::invalid_argument("partial_trace: traced factor out of range");

  const int nf = static_cast<int>(dims.size());
  std::vector<int> strides(nf, 1);
  for (int f = nf - 2; f >= 0; --f) strides[f] = strides[f + 1] * dims[f + 1];

  const int dk = dims[traced];
  const int dkeep = total / dk;

  // Strides of the kept factors within the reduced matrix.
  std::vector<int> kept;
  for (int f = 0; f < nf; ++f)
    if (f != traced) kept.push_back(f);
  std::vector<int> kstrides(kept.size(), 1);
  for (int f = static_cast<int>(kept.size()) - 2; f >= 0; --f)
    kstrides[f] = kstrides[f + 1] * dims[kept[f + 1]];

  cmat out = cmat::Zero(dkeep, dkeep);
  std::vector<int> ridx(kept.size(), 0), cidx(kept.size(), 0);
  for (int r = 0; r < dkeep; ++r) {
    int rr = r;
    for (size_t f = 0; f < kept.size(); ++f) {
      ridx[f] = rr / kstrides[f];
      rr %= kstrides[f];
    }
    for (int c = 0; c < dkeep; ++c) {
      int cc = c;
      for (size_t f = 0; f < kept.size(); ++f) {
        cidx[f] = cc / kstrides[f];
        cc %= kstrides[f];
      }
      cplx acc = 0.0;
      for (int k = 0; k < dk; ++k) {
        int row = k * strides[traced];
        int col = k * strides[traced];
        for (size_t f = 0; f < kept.size(); ++f) {
          row += ridx[f] * strides[kept[f]];
          col += cidx[f] * strides[kept[f]];
        }
        acc += rho(row, col);
      }
      out(r, c) = acc;
    }
  }
  return out;
}

}  // namespace qpi
