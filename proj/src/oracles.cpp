#include "cbnorm/oracles.hpp"

#include <fftw3.h>

#include <Eigen/Dense>
#include <mutex>
#include <random>

namespace cbnorm::oracle {

namespace {

using Mat = Eigen::MatrixXcd;

Mat to_eigen(const ComplexMatrix& m) {
  Mat out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j);
  return out;
}

ComplexMatrix from_eigen(const Mat& m) {
  ComplexMatrix out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = m(i, j);
  return out;
}

// W V^* from the SVD of g
Mat polar(const Mat& g) {
  Eigen::JacobiSVD<Mat> svd(g, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

}  // namespace

UnitarySearch unitary_search(const ComplexMatrix& u, std::uint64_t seed, int restarts, int iterations) {
  if (!u.square() || u.empty()) throw InputError("unitary_search: symbol must be square");
  const Eigen::Index n = static_cast<Eigen::Index>(u.rows());
  const Mat uu = to_eigen(u);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;

  UnitarySearch best;
  for (int k = 0; k < restarts; ++k) {
    Mat x(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) x(i, j) = {normal(rng), normal(rng)};
    x = polar(x);
    double value = 0.0;
    for (int it = 0; it < iterations; ++it) {
      const Mat y = uu.cwiseProduct(x);
      Eigen::JacobiSVD<Mat> svd(y, Eigen::ComputeFullU | Eigen::ComputeFullV);
      const double v = svd.singularValues()(0);
      if (it > 0 && v <= value * (1.0 + 1e-14)) {
        value = std::max(value, v);
        break;
      }
      value = v;
      // a^* (u o X) b = sum_ij X_ij G_ij with G_ij = conj(a_i) u_ij b_j,
      // maximized over the unit ball by X = conj(polar(G)).
      const Eigen::VectorXcd a = svd.matrixU().col(0), b = svd.matrixV().col(0);
      const Mat g = a.conjugate().asDiagonal() * uu * b.asDiagonal();
      x = polar(g).conjugate();
    }
    if (value > best.value) {
      best.value = value;
      best.best = from_eigen(x);
    }
  }
  return best;
}

std::vector<Complex> dft_coefficients(std::span<const Complex> u) {
  const int n = static_cast<int>(u.size());
  if (n == 0) return {};
  std::vector<Complex> in(u.begin(), u.end()), out(u.size());
  // the FFTW planner is not thread-safe
  static std::mutex planner;
  std::lock_guard lock(planner);
  fftw_plan plan = fftw_plan_dft_1d(n, reinterpret_cast<fftw_complex*>(in.data()),
                                    reinterpret_cast<fftw_complex*>(out.data()), FFTW_FORWARD,
                                    FFTW_ESTIMATE);
  fftw_execute(plan);
  fftw_destroy_plan(plan);
  for (auto& c : out) c /= static_cast<double>(n);
  return out;
}

double cyclic_multiplier_norm(std::span<const Complex> u) {
  double s = 0.0;
  for (const auto& c : dft_coefficients(u)) s += std::abs(c);
  return s;
}

}  // namespace cbnorm::oracle
