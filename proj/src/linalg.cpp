#include "egin/linalg.hpp"

#include <cstdlib>
#include <string>

#include "egin/errors.hpp"

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

namespace egin::linalg {

namespace {

// Runs before OpenBLAS's own static initialiser reads the variable, which is
// why OpenBLAS must be linked statically. A value set by the user wins.
__attribute__((constructor(101))) void pin_openblas_coretype() {
#ifdef EGIN_OPENBLAS_CORETYPE
  if (EGIN_OPENBLAS_CORETYPE[0] != '\0') setenv("OPENBLAS_CORETYPE", EGIN_OPENBLAS_CORETYPE, 0);
#endif
}

void check(lapack_int info, const char* routine) {
  if (info != 0) throw NumericalError(std::string(routine) + " failed, info = " + std::to_string(info));
}

std::vector<std::complex<double>> merge(const std::vector<double>& wr, const std::vector<double>& wi) {
  std::vector<std::complex<double>> w(wr.size());
  for (std::size_t i = 0; i < wr.size(); ++i) w[i] = {wr[i], wi[i]};
  return w;
}

}  // namespace

Eigensystem eig(const Eigen::MatrixXd& a) {
  const lapack_int n = static_cast<lapack_int>(a.rows());
  Eigen::MatrixXd work = a, vr(n, n);
  std::vector<double> wr(n), wi(n);
  check(LAPACKE_dgeev(LAPACK_COL_MAJOR, 'N', 'V', n, work.data(), n, wr.data(), wi.data(), nullptr,
                      1, vr.data(), n),
        "dgeev");
  Eigensystem out;
  out.values = merge(wr, wi);
  out.right.resize(n, n);
  for (lapack_int j = 0; j < n; ++j) {
    if (wi[j] == 0.0) {
      out.right.col(j) = vr.col(j).cast<std::complex<double>>();
    } else {
      // Conjugate pair stored as (re, im) in columns j, j+1.
      for (lapack_int i = 0; i < n; ++i) {
        out.right(i, j) = {vr(i, j), vr(i, j + 1)};
        out.right(i, j + 1) = {vr(i, j), -vr(i, j + 1)};
      }
      ++j;
    }
  }
  return out;
}

Eigensystem eig(const Eigen::MatrixXcd& a) {
  const lapack_int n = static_cast<lapack_int>(a.rows());
  Eigen::MatrixXcd work = a;
  Eigensystem out;
  out.values.resize(n);
  out.right.resize(n, n);
  check(LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'V', n, work.data(), n, out.values.data(), nullptr, 1,
                      out.right.data(), n),
        "zgeev");
  return out;
}

std::vector<std::complex<double>> eigenvalues(const Eigen::MatrixXd& a) {
  const lapack_int n = static_cast<lapack_int>(a.rows());
  Eigen::MatrixXd work = a;
  std::vector<double> wr(n), wi(n);
  check(LAPACKE_dgeev(LAPACK_COL_MAJOR, 'N', 'N', n, work.data(), n, wr.data(), wi.data(), nullptr,
                      1, nullptr, 1),
        "dgeev");
  return merge(wr, wi);
}

std::vector<std::complex<double>> eigenvalues(const Eigen::MatrixXcd& a) {
  const lapack_int n = static_cast<lapack_int>(a.rows());
  Eigen::MatrixXcd work = a;
  std::vector<std::complex<double>> w(n);
  check(LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'N', n, work.data(), n, w.data(), nullptr, 1, nullptr, 1),
        "zgeev");
  return w;
}

Eigen::MatrixXcd inverse(const Eigen::MatrixXcd& a) {
  const lapack_int n = static_cast<lapack_int>(a.rows());
  Eigen::MatrixXcd inv = a;
  std::vector<lapack_int> piv(n);
  check(LAPACKE_zgetrf(LAPACK_COL_MAJOR, n, n, inv.data(), n, piv.data()), "zgetrf");
  check(LAPACKE_zgetri(LAPACK_COL_MAJOR, n, inv.data(), n, piv.data()), "zgetri");
  return inv;
}

Eigen::MatrixXd hessenberg(const Eigen::MatrixXd& a) {
  const lapack_int n = static_cast<lapack_int>(a.rows());
  Eigen::MatrixXd h = a;
  std::vector<double> tau(std::max<lapack_int>(n - 1, 1));
  check(LAPACKE_dgehrd(LAPACK_COL_MAJOR, n, 1, n, h.data(), n, tau.data()), "dgehrd");
  for (lapack_int j = 0; j < n; ++j)
    for (lapack_int i = j + 2; i < n; ++i) h(i, j) = 0.0;
  return h;
}

Eigen::MatrixXcd hessenberg(const Eigen::MatrixXcd& a) {
  const lapack_int n = static_cast<lapack_int>(a.rows());
  Eigen::MatrixXcd h = a;
  std::vector<std::complex<double>> tau(std::max<lapack_int>(n - 1, 1));
  check(LAPACKE_zgehrd(LAPACK_COL_MAJOR, n, 1, n, h.data(), n, tau.data()), "zgehrd");
  for (lapack_int j = 0; j < n; ++j)
    for (lapack_int i = j + 2; i < n; ++i) h(i, j) = 0.0;
  return h;
}

std::vector<std::complex<double>> hessenberg_eigenvalues(const Eigen::MatrixXd& h) {
  const lapack_int n = static_cast<lapack_int>(h.rows());
  Eigen::MatrixXd work = h;
  std::vector<double> wr(n), wi(n);
  check(LAPACKE_dhseqr(LAPACK_COL_MAJOR, 'E', 'N', n, 1, n, work.data(), n, wr.data(), wi.data(),
                       nullptr, 1),
        "dhseqr");
  return merge(wr, wi);
}

std::vector<std::complex<double>> hessenberg_eigenvalues(const Eigen::MatrixXcd& h) {
  const lapack_int n = static_cast<lapack_int>(h.rows());
  Eigen::MatrixXcd work = h;
  std::vector<std::complex<double>> w(n);
  check(LAPACKE_zhseqr(LAPACK_COL_MAJOR, 'E', 'N', n, 1, n, work.data(), n, w.data(), nullptr, 1),
        "zhseqr");
  return w;
}

SelectedVectors hessenberg_vectors(const Eigen::MatrixXcd& h,
                                   const std::vector<std::complex<double>>& w,
                                   const std::vector<int>& select) {
  const lapack_int n = static_cast<lapack_int>(h.rows());
  std::vector<lapack_logical> sel(n, 0);
  lapack_int mm = 0;
  for (lapack_int i = 0; i < n; ++i) {
    if (select[i]) {
      sel[i] = 1;
      ++mm;
    }
  }
  SelectedVectors out;
  if (mm == 0) return out;
  std::vector<std::complex<double>> wc = w;
  out.left.resize(n, mm);
  out.right.resize(n, mm);
  std::vector<lapack_int> ifaill(mm), ifailr(mm);
  lapack_int m = 0;
  const lapack_int info =
      LAPACKE_zhsein(LAPACK_COL_MAJOR, 'B', 'N', 'N', sel.data(), n, h.data(), n, wc.data(),
                    out.left.data(), n, out.right.data(), n, mm, &m, ifaill.data(), ifailr.data());
  if (info < 0) check(info, "zhsein");
  for (lapack_int i = 0; i < n; ++i)
    if (sel[i]) out.values.push_back(wc[i]);
  if (info > 0) {
    for (lapack_int j = 0; j < mm; ++j)
      if (ifaill[j] != 0 || ifailr[j] != 0) out.failed.push_back(static_cast<int>(j));
  }
  return out;
}

}  // namespace egin::linalg
