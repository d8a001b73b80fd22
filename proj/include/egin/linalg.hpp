#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

// Thin wrappers over the LAPACK routines the spectral code needs. All throw
// NumericalError on a nonzero LAPACK info.

namespace egin::linalg {

struct Eigensystem {
  std::vector<std::complex<double>> values;
  Eigen::MatrixXcd right;  // columns are right eigenvectors
};

/// Eigenvalues and right eigenvectors of a general matrix (geev).
Eigensystem eig(const Eigen::MatrixXd& a);
Eigensystem eig(const Eigen::MatrixXcd& a);

/// Eigenvalues only.
std::vector<std::complex<double>> eigenvalues(const Eigen::MatrixXd& a);
std::vector<std::complex<double>> eigenvalues(const Eigen::MatrixXcd& a);

/// Inverse through an LU factorisation (getrf/getri).
Eigen::MatrixXcd inverse(const Eigen::MatrixXcd& a);

/// Upper Hessenberg form H = Q^* A Q with the entries below the subdiagonal zeroed.
Eigen::MatrixXd hessenberg(const Eigen::MatrixXd& a);
Eigen::MatrixXcd hessenberg(const Eigen::MatrixXcd& a);

/// Eigenvalues of an upper Hessenberg matrix (hseqr, job = 'E').
std::vector<std::complex<double>> hessenberg_eigenvalues(const Eigen::MatrixXd& h);
std::vector<std::complex<double>> hessenberg_eigenvalues(const Eigen::MatrixXcd& h);

struct SelectedVectors {
  std::vector<std::complex<double>> values;  // possibly perturbed by the solver
  Eigen::MatrixXcd left;                     // columns l_j with l_j^* H = lambda_j l_j^*
  Eigen::MatrixXcd right;                    // columns r_j with H r_j = lambda_j r_j
  std::vector<int> failed;                   // positions that did not converge
};

/// Left and right eigenvectors of the complex upper Hessenberg h for the
/// eigenvalues w[i] with select[i] set, by inverse iteration (hsein).
SelectedVectors hessenberg_vectors(const Eigen::MatrixXcd& h,
                                   const std::vector<std::complex<double>>& w,
                                   const std::vector<int>& select);

}  // namespace egin::linalg
