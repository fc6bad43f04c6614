#include "regret_lab/panel.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>
#include <string>

#include "regret_lab/errors.hpp"

namespace regret_lab {

ExpertPanel::ExpertPanel(int depth, double mu, std::vector<std::vector<double>> q)
    : depth_(depth), experts_(0), mu_(mu), q_(std::move(q)) {
  if (depth < 1 || depth > kMaxDebruijnDepth) {
    throw SizeError("panel depth must lie in [1, " + std::to_string(kMaxDebruijnDepth) + "]");
  }
  if (!(mu > 0.0 && mu < 1.0)) throw PreconditionError("mu must lie in (0, 1)");
  if (q_.size() != (std::size_t{1} << depth)) {
    throw PreconditionError("panel needs " + std::to_string(std::size_t{1} << depth) +
                            " histories, got " + std::to_string(q_.size()));
  }
  experts_ = static_cast<int>(q_.front().size());
  if (experts_ < 2) throw PreconditionError("panel needs at least two experts");
  for (std::size_t m = 0; m < q_.size(); ++m) {
    if (q_[m].size() != static_cast<std::size_t>(experts_)) {
      throw PreconditionError("history " + MarketState(depth, static_cast<std::uint32_t>(m)).to_string() +
                              " has the wrong number of predictions");
    }
    for (double v : q_[m]) {
      if (!std::isfinite(v) || std::abs(v) > mu) {
        throw PreconditionError("prediction " + std::to_string(v) + " at history " +
                                MarketState(depth, static_cast<std::uint32_t>(m)).to_string() +
                                " exceeds mu = " + std::to_string(mu));
      }
    }
  }
}

ExpertPanel ExpertPanel::symmetric(int depth, double mu) {
  return ExpertPanel(depth, mu, std::vector<std::vector<double>>(std::size_t{1} << depth, {mu, -mu}));
}

ExpertPanel ExpertPanel::random(int depth, int experts, double mu, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::vector<double>> q(std::size_t{1} << depth, std::vector<double>(experts));
  for (auto& row : q) {
    for (double& v : row) {
      // 53-bit uniform in [0, 1), mapped to [-mu, mu).
      const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      v = mu * (2.0 * u - 1.0);
    }
  }
  return ExpertPanel(depth, mu, std::move(q));
}

std::span<const double> ExpertPanel::q(const MarketState& m) const {
  if (m.depth() != depth_) throw DomainError("history depth does not match panel");
  return q_[m.id()];
}

std::vector<double> ExpertPanel::r(std::size_t m) const {
  const auto& row = q_.at(m);
  std::vector<double> out(static_cast<std::size_t>(experts_ - 1));
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = row[j] - row.back();
  return out;
}

std::vector<double> ExpertPanel::ellipticity_matrix() const {
  const std::size_t k = static_cast<std::size_t>(experts_ - 1);
  std::vector<double> M(k * k, 0.0);
  for (std::size_t m = 0; m < q_.size(); ++m) {
    const auto rm = r(m);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) M[i * k + j] += rm[i] * rm[j];
  }
  const double scale = 1.0 / static_cast<double>(2 * q_.size());
  for (double& v : M) v *= scale;
  return M;
}

double ExpertPanel::lambda() const {
  const auto k = static_cast<Eigen::Index>(experts_ - 1);
  const auto flat = ellipticity_matrix();
  Eigen::MatrixXd M(k, k);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < k; ++j) M(i, j) = flat[static_cast<std::size_t>(i * k + j)];
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(M, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericError("ellipticity eigenvalue solve failed");
  return solver.eigenvalues()(0);
}

NodeFunction ExpertPanel::r_squared() const {
  if (experts_ != 2) throw PreconditionError("r_squared requires exactly two experts");
  NodeFunction out(q_.size());
  for (std::size_t m = 0; m < q_.size(); ++m) {
    const double d = q_[m][0] - q_[m][1];
    out[m] = d * d;
  }
  return out;
}

double ExpertPanel::sigma2() const { return mean(r_squared()); }

}  // namespace regret_lab
