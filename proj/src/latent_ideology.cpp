#include "polarsample/latent_ideology.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <ostream>

#include <fmt/format.h>

namespace polarsample {
namespace {

constexpr double kDisconnectedTolerance = 1e-9;

// sigma_1 = 1 exactly when the bipartite graph is disconnected; the leading
// direction is then constant on each component and only roundoff separates
// its rows. Averaging per component removes that noise.
void snap_to_components(const InteractionMatrix& matrix, std::vector<double>& user) {
  std::vector<std::size_t> parent(matrix.rows());
  for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = i;
  auto find = [&](std::size_t v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  std::vector<std::size_t> first_row(matrix.cols(), matrix.rows());
  for (const auto& e : matrix.entries()) {
    if (first_row[e.col] == matrix.rows()) {
      first_row[e.col] = e.row;
    } else {
      parent[find(e.row)] = find(first_row[e.col]);
    }
  }
  std::vector<double> sum(matrix.rows(), 0.0);
  std::vector<std::size_t> size(matrix.rows(), 0);
  for (std::size_t i = 0; i < user.size(); ++i) {
    sum[find(i)] += user[i];
    ++size[find(i)];
  }
  for (std::size_t i = 0; i < user.size(); ++i) {
    user[i] = sum[find(i)] / static_cast<double>(size[find(i)]);
  }
}

}  // namespace

IdeologyScores correspondence_analysis(const InteractionMatrix& matrix,
                                       const CorrespondenceOptions& options) {
  const auto rows = static_cast<Eigen::Index>(matrix.rows());
  const auto cols = static_cast<Eigen::Index>(matrix.cols());
  if (rows < 2 || cols < 2) {
    throw Error(ErrorCode::MatrixDegenerate, "correspondence analysis needs a 2x2 matrix");
  }

  const double total = static_cast<double>(matrix.total());
  Eigen::VectorXd r = Eigen::VectorXd::Zero(rows);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(cols);
  for (const auto& e : matrix.entries()) {
    const double p = static_cast<double>(e.count) / total;
    r(static_cast<Eigen::Index>(e.row)) += p;
    c(static_cast<Eigen::Index>(e.col)) += p;
  }
  const Eigen::VectorXd r_isqrt = r.cwiseSqrt().cwiseInverse();
  const Eigen::VectorXd c_isqrt = c.cwiseSqrt().cwiseInverse();

  // S = D_r^{-1/2} P D_c^{-1/2} - sqrt(r) sqrt(c)^T, which expands the
  // centered form without materializing P - r c^T.
  Eigen::MatrixXd s = -(r.cwiseSqrt() * c.cwiseSqrt().transpose());
  for (const auto& e : matrix.entries()) {
    const auto i = static_cast<Eigen::Index>(e.row);
    const auto j = static_cast<Eigen::Index>(e.col);
    s(i, j) += static_cast<double>(e.count) / total * r_isqrt(i) * c_isqrt(j);
  }

  Eigen::BDCSVD<Eigen::MatrixXd> svd(s, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success) {
    throw Error(ErrorCode::NumericalFailure, "SVD did not converge");
  }
  const Eigen::VectorXd& sigma = svd.singularValues();
  if (sigma.size() == 0 || !std::isfinite(sigma(0))) {
    throw Error(ErrorCode::NumericalFailure, "non-finite singular values");
  }
  if (sigma(0) < options.min_singular_value) {
    throw Error(ErrorCode::DegenerateSpectrum,
                fmt::format("leading singular value {:.3g}", sigma(0)));
  }

  IdeologyScores out;
  out.singular_values.assign(sigma.data(), sigma.data() + sigma.size());

  std::vector<double> user(matrix.rows(), 0.0);
  if (options.coordinates == RowCoordinates::Standard) {
    // Transition formula: u_i / sqrt(r_i) = sum_j (A_ij / A_i.) b_j / sigma
    // with b_j = v_j / sqrt(c_j). It reads only the row profile, so users
    // with proportional rows get bit-identical scores.
    const Eigen::VectorXd b = svd.matrixV().col(0).cwiseProduct(c_isqrt) / sigma(0);
    std::vector<std::uint64_t> row_total(matrix.rows(), 0);
    for (const auto& e : matrix.entries()) row_total[e.row] += e.count;
    for (const auto& e : matrix.entries()) {
      const double profile = static_cast<double>(e.count) / static_cast<double>(row_total[e.row]);
      user[e.row] += profile * b(static_cast<Eigen::Index>(e.col));
    }
  } else {
    const auto leading = svd.matrixU().col(0);
    for (Eigen::Index i = 0; i < rows; ++i) user[static_cast<std::size_t>(i)] = leading(i);
  }
  if (sigma(0) > 1.0 - kDisconnectedTolerance) snap_to_components(matrix, user);
  for (std::size_t i = 0; i < matrix.rows(); ++i) {
    out.user_scores.emplace(matrix.row_ids()[i], user[i]);
  }

  std::vector<std::vector<double>> retweeters(matrix.cols());
  for (const auto& e : matrix.entries()) retweeters[e.col].push_back(user[e.row]);
  for (std::size_t j = 0; j < matrix.cols(); ++j) {
    out.influencer_scores.emplace(matrix.col_ids()[j], median(std::move(retweeters[j])));
  }
  return out;
}

IdeologyScores normalize_scores(const IdeologyScores& scores) {
  const std::size_t n = scores.user_scores.size();
  if (n < 2) throw Error(ErrorCode::ZeroVariance, "fewer than two user scores");

  double mean = 0.0;
  for (const auto& [id, x] : scores.user_scores) mean += x;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (const auto& [id, x] : scores.user_scores) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));

  const double first = scores.user_scores.begin()->second;
  const bool all_equal = std::all_of(scores.user_scores.begin(), scores.user_scores.end(),
                                     [&](const auto& kv) { return kv.second == first; });
  if (all_equal || !(sd > 0.0)) throw Error(ErrorCode::ZeroVariance, "all user scores equal");

  IdeologyScores out = scores;
  for (auto& [id, x] : out.user_scores) x = (x - mean) / sd;
  for (auto& [id, x] : out.influencer_scores) x = (x - mean) / sd;
  out.normalized = true;
  return out;
}

IdeologyScores sign_convention(const IdeologyScores& scores,
                               const std::set<std::string>& anchor) {
  double sum = 0.0;
  std::size_t found = 0;
  for (const auto& id : anchor) {
    if (auto it = scores.influencer_scores.find(id); it != scores.influencer_scores.end()) {
      sum += it->second;
      ++found;
    }
  }
  if (found == 0) throw Error(ErrorCode::AnchorAbsent, "no anchor influencer is scored");
  if (sum / static_cast<double>(found) <= 0.0) return scores;

  IdeologyScores out = scores;
  for (auto& [id, x] : out.user_scores) x = -x;
  for (auto& [id, x] : out.influencer_scores) x = -x;
  return out;
}

double median(std::vector<double> values) {
  if (values.empty()) throw Error(ErrorCode::InvalidArgument, "median of empty set");
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid),
                   values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  const double lower =
      *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
  return lower + (upper - lower) / 2.0;
}

std::vector<double> user_score_values(const IdeologyScores& scores) {
  std::vector<double> out;
  out.reserve(scores.user_scores.size());
  for (const auto& [id, x] : scores.user_scores) out.push_back(x);
  return out;
}

void write_scores_csv(std::ostream& out, const IdeologyScores& scores) {
  out << "id,role,score\n";
  for (const auto& [id, x] : scores.user_scores) out << fmt::format("{},user,{}\n", id, x);
  for (const auto& [id, x] : scores.influencer_scores) {
    out << fmt::format("{},influencer,{}\n", id, x);
  }
}

}  // namespace polarsample
