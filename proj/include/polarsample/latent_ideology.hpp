#pragma once

#include <iosfwd>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "polarsample/matrix_builder.hpp"

namespace polarsample {

struct IdeologyScores {
  std::map<std::string, double> user_scores;
  std::map<std::string, double> influencer_scores;
  /// Singular values of the centered, standardized matrix, descending.
  std::vector<double> singular_values;
  bool normalized = false;

  friend bool operator==(const IdeologyScores&, const IdeologyScores&) = default;
};

/// How a user's position is read off the leading left singular vector u.
enum class RowCoordinates {
  /// u_i / sqrt(r_i): CA standard row coordinates. Users with identical
  /// retweet profiles get identical scores regardless of activity.
  Standard,
  /// u_i as is.
  SingularVector,
};

struct CorrespondenceOptions {
  RowCoordinates coordinates = RowCoordinates::Standard;
  /// Below this leading singular value the matrix carries no structure.
  double min_singular_value = 1e-12;
};

/// One-dimensional correspondence analysis of a pruned matrix.
///
/// With P = A / total, row masses r and column masses c, the matrix
/// S = D_r^{-1/2} (P - r c^T) D_c^{-1/2} is decomposed and users are placed
/// along the singular vector of its largest singular value. An influencer
/// sits at the median score of the users who retweeted it.
///
/// Throws NumericalFailure when the SVD does not converge and
/// DegenerateSpectrum when the leading singular value is negligible.
IdeologyScores correspondence_analysis(const InteractionMatrix& matrix,
                                       const CorrespondenceOptions& options = {});

/// Affine map of user scores to mean 0 and sample standard deviation 1;
/// influencer scores get the same map. Throws ZeroVariance.
IdeologyScores normalize_scores(const IdeologyScores& scores);

/// Negates every score when the anchor influencers sit on the positive side
/// on average. Throws AnchorAbsent when no anchor id has a score.
IdeologyScores sign_convention(const IdeologyScores& scores,
                               const std::set<std::string>& anchor);

/// Even-sized inputs average the two central values.
double median(std::vector<double> values);

/// User scores in id order.
std::vector<double> user_score_values(const IdeologyScores& scores);

/// CSV with header "id,role,score"; users first, then influencers.
void write_scores_csv(std::ostream& out, const IdeologyScores& scores);

}  // namespace polarsample
