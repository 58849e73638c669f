#include "polarsample/matrix_builder.hpp"

#include <algorithm>
#include <map>
#include <ostream>
#include <unordered_map>

namespace polarsample {

InteractionMatrix InteractionMatrix::from_entries(std::vector<std::string> row_ids,
                                                  std::vector<std::string> col_ids,
                                                  std::vector<MatrixEntry> entries) {
  auto check = [](bool ok, const char* what) {
    if (!ok) throw Error(ErrorCode::InvalidArgument, what);
  };
  check(std::set<std::string>(row_ids.begin(), row_ids.end()).size() == row_ids.size(),
        "duplicate row id");
  check(std::set<std::string>(col_ids.begin(), col_ids.end()).size() == col_ids.size(),
        "duplicate column id");

  std::sort(entries.begin(), entries.end(), [](const MatrixEntry& a, const MatrixEntry& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  std::vector<bool> row_seen(row_ids.size(), false);
  std::vector<bool> col_seen(col_ids.size(), false);
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    check(e.row < row_ids.size() && e.col < col_ids.size(), "entry index out of range");
    check(e.count >= 1, "non-positive count");
    check(i == 0 || entries[i - 1].row != e.row || entries[i - 1].col != e.col,
          "duplicate entry");
    row_seen[e.row] = true;
    col_seen[e.col] = true;
    total += e.count;
  }
  check(std::all_of(row_seen.begin(), row_seen.end(), [](bool b) { return b; }),
        "empty row");
  check(std::all_of(col_seen.begin(), col_seen.end(), [](bool b) { return b; }),
        "empty column");

  InteractionMatrix m;
  m.row_ids_ = std::move(row_ids);
  m.col_ids_ = std::move(col_ids);
  m.entries_ = std::move(entries);
  m.total_ = total;
  return m;
}

std::uint64_t InteractionMatrix::count(std::size_t row, std::size_t col) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), MatrixEntry{row, col, 0},
                             [](const MatrixEntry& a, const MatrixEntry& b) {
                               return a.row != b.row ? a.row < b.row : a.col < b.col;
                             });
  return it != entries_.end() && it->row == row && it->col == col ? it->count : 0;
}

InteractionMatrix build_matrix(const EventSet& events,
                               const std::set<std::string>& influencers) {
  if (influencers.empty()) throw Error(ErrorCode::InvalidArgument, "empty influencer set");

  std::map<std::pair<std::string, std::string>, std::uint64_t> cells;
  for (const auto& e : events.events()) {
    if (influencers.contains(e.influencer_id)) ++cells[{e.retweeter_id, e.influencer_id}];
  }
  if (cells.empty()) throw Error(ErrorCode::EmptyMatrix, "no event targets an influencer");

  std::set<std::string> users;
  std::set<std::string> cols;
  for (const auto& [key, count] : cells) {
    users.insert(key.first);
    cols.insert(key.second);
  }
  std::vector<std::string> row_ids(users.begin(), users.end());
  std::vector<std::string> col_ids(cols.begin(), cols.end());
  std::unordered_map<std::string, std::size_t> col_index;
  for (std::size_t j = 0; j < col_ids.size(); ++j) col_index.emplace(col_ids[j], j);

  std::vector<MatrixEntry> entries;
  entries.reserve(cells.size());
  std::size_t row = 0;
  const std::string* current = nullptr;
  for (const auto& [key, count] : cells) {
    if (current != nullptr && *current != key.first) ++row;
    current = &key.first;
    entries.push_back({row, col_index.at(key.second), count});
  }
  return InteractionMatrix::from_entries(std::move(row_ids), std::move(col_ids),
                                         std::move(entries));
}

InteractionMatrix prune_single_influencer_users(const InteractionMatrix& matrix) {
  const auto& entries = matrix.entries();
  std::vector<bool> row_alive(matrix.rows(), true);
  std::vector<bool> col_alive(matrix.cols(), true);

  // Each pass removes single-column rows, then columns they orphaned.
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<std::size_t> row_degree(matrix.rows(), 0);
    for (const auto& e : entries) {
      if (row_alive[e.row] && col_alive[e.col]) ++row_degree[e.row];
    }
    for (std::size_t r = 0; r < matrix.rows(); ++r) {
      if (row_alive[r] && row_degree[r] < 2) {
        row_alive[r] = false;
        changed = true;
      }
    }
    std::vector<std::size_t> col_degree(matrix.cols(), 0);
    for (const auto& e : entries) {
      if (row_alive[e.row] && col_alive[e.col]) ++col_degree[e.col];
    }
    for (std::size_t c = 0; c < matrix.cols(); ++c) {
      if (col_alive[c] && col_degree[c] == 0) {
        col_alive[c] = false;
        changed = true;
      }
    }
  }

  std::vector<std::size_t> row_map(matrix.rows());
  std::vector<std::size_t> col_map(matrix.cols());
  std::vector<std::string> row_ids;
  std::vector<std::string> col_ids;
  for (std::size_t r = 0; r < matrix.rows(); ++r) {
    if (row_alive[r]) {
      row_map[r] = row_ids.size();
      row_ids.push_back(matrix.row_ids()[r]);
    }
  }
  for (std::size_t c = 0; c < matrix.cols(); ++c) {
    if (col_alive[c]) {
      col_map[c] = col_ids.size();
      col_ids.push_back(matrix.col_ids()[c]);
    }
  }
  if (row_ids.size() < 2 || col_ids.size() < 2) {
    throw Error(ErrorCode::MatrixDegenerate,
                std::to_string(row_ids.size()) + " rows x " + std::to_string(col_ids.size()) +
                    " columns survive pruning");
  }
  std::vector<MatrixEntry> kept;
  for (const auto& e : entries) {
    if (row_alive[e.row] && col_alive[e.col]) {
      kept.push_back({row_map[e.row], col_map[e.col], e.count});
    }
  }
  return InteractionMatrix::from_entries(std::move(row_ids), std::move(col_ids),
                                         std::move(kept));
}

void write_coordinate(std::ostream& out, const InteractionMatrix& matrix) {
  out << "row_id,col_id,count\n";
  for (const auto& e : matrix.entries()) {
    out << matrix.row_ids()[e.row] << ',' << matrix.col_ids()[e.col] << ',' << e.count << '\n';
  }
}

}  // namespace polarsample
