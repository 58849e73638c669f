#pragma once

#include <cstdint>
#include <iosfwd>
#include <set>
#include <string>
#include <vector>

#include "polarsample/core_types.hpp"

namespace polarsample {

struct MatrixEntry {
  std::size_t row = 0;
  std::size_t col = 0;
  std::uint64_t count = 0;

  friend bool operator==(const MatrixEntry&, const MatrixEntry&) = default;
};

/// Sparse user x influencer retweet counts.
///
/// Entries are kept in row-major order with strictly positive counts, and
/// every row and column holds at least one entry. A user id may occur both
/// as a row and as a column.
class InteractionMatrix {
 public:
  /// Validates the invariants above; throws InvalidArgument otherwise.
  static InteractionMatrix from_entries(std::vector<std::string> row_ids,
                                        std::vector<std::string> col_ids,
                                        std::vector<MatrixEntry> entries);

  std::size_t rows() const noexcept { return row_ids_.size(); }
  std::size_t cols() const noexcept { return col_ids_.size(); }
  const std::vector<std::string>& row_ids() const noexcept { return row_ids_; }
  const std::vector<std::string>& col_ids() const noexcept { return col_ids_; }
  const std::vector<MatrixEntry>& entries() const noexcept { return entries_; }
  std::uint64_t total() const noexcept { return total_; }

  /// Zero when the cell is not stored.
  std::uint64_t count(std::size_t row, std::size_t col) const;

  friend bool operator==(const InteractionMatrix&, const InteractionMatrix&) = default;

 private:
  std::vector<std::string> row_ids_;
  std::vector<std::string> col_ids_;
  std::vector<MatrixEntry> entries_;
  std::uint64_t total_ = 0;
};

/// Counts retweets into the given influencers. Rows and columns are sorted
/// by id. Throws EmptyMatrix when no event targets an influencer.
InteractionMatrix build_matrix(const EventSet& events,
                               const std::set<std::string>& influencers);

/// Drops users whose retweets touch a single influencer, then columns left
/// empty, until neither step removes anything. Throws MatrixDegenerate when
/// fewer than two rows or columns survive.
InteractionMatrix prune_single_influencer_users(const InteractionMatrix& matrix);

/// Coordinate dump, one "row_id,col_id,count" line per entry after a header.
void write_coordinate(std::ostream& out, const InteractionMatrix& matrix);

}  // namespace polarsample
