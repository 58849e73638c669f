#pragma once

// Helpers shared by the unit and acceptance binaries: fixture loading,
// scratch directories and small random generators for property tests.

#include <nlohmann/json.hpp>

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "polarsample/core_types.hpp"
#include "polarsample/matrix_builder.hpp"
#include "polarsample/synthetic.hpp"

namespace testing {

namespace fs = std::filesystem;

inline fs::path data_dir() { return fs::path(POLARSAMPLE_TEST_DATA); }

inline nlohmann::json load_fixture(const std::string& name) {
  std::ifstream in(data_dir() / name);
  return nlohmann::json::parse(in);
}

inline std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline void spit(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

/// Fresh directory under the system temp dir, removed on destruction.
class ScratchDir {
 public:
  explicit ScratchDir(const std::string& tag) {
    static std::atomic<int> counter{0};
    path_ = fs::temp_directory_path() /
            ("polarsample_" + tag + "_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter++));
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~ScratchDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  ScratchDir(const ScratchDir&) = delete;
  ScratchDir& operator=(const ScratchDir&) = delete;

  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
};

/// Byte-level equality of every regular file below two directories, except
/// the names listed in `skip`.
inline bool same_tree(const fs::path& a, const fs::path& b,
                      const std::vector<std::string>& skip = {}) {
  auto listing = [&](const fs::path& root) {
    std::vector<std::string> files;
    for (const auto& entry : fs::recursive_directory_iterator(root)) {
      if (!entry.is_regular_file()) continue;
      auto rel = fs::relative(entry.path(), root).generic_string();
      bool skipped = false;
      for (const auto& s : skip) skipped |= rel == s;
      if (!skipped) files.push_back(rel);
    }
    std::sort(files.begin(), files.end());
    return files;
  };
  const auto fa = listing(a);
  if (fa != listing(b) || fa.empty()) return false;
  for (const auto& f : fa) {
    if (slurp(a / f) != slurp(b / f)) return false;
  }
  return true;
}

inline polarsample::RetweetEvent event(std::string tweet, std::string user, std::string target,
                                       std::int64_t ts = 0, std::string text = "") {
  return {std::move(tweet), std::move(user), std::move(target), ts, std::move(text)};
}

/// Dense matrix of counts in [0, max_count] with the given density.
inline polarsample::SyntheticConfig synth_config(std::size_t users, std::size_t influencers,
                                                std::size_t events) {
  polarsample::SyntheticConfig c;
  c.n_users = users;
  c.n_influencers = influencers;
  c.n_events = events;
  return c;
}

inline std::vector<std::vector<std::uint64_t>> random_counts(std::mt19937_64& gen,
                                                             std::size_t rows,
                                                             std::size_t cols, double density,
                                                             std::uint64_t max_count) {
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_int_distribution<std::uint64_t> count(1, max_count);
  std::vector<std::vector<std::uint64_t>> m(rows, std::vector<std::uint64_t>(cols, 0));
  for (auto& row : m)
    for (auto& v : row)
      if (coin(gen) < density) v = count(gen);
  return m;
}

inline std::string row_id(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "r%05zu", i);
  return buf;
}
inline std::string col_id(std::size_t j) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "c%05zu", j);
  return buf;
}

/// InteractionMatrix from a dense matrix, dropping all-zero rows and columns.
inline polarsample::InteractionMatrix to_matrix(
    const std::vector<std::vector<std::uint64_t>>& counts) {
  const std::size_t rows = counts.size();
  const std::size_t cols = counts.front().size();
  std::vector<std::size_t> row_map(rows, SIZE_MAX), col_map(cols, SIZE_MAX);
  std::vector<std::string> row_ids, col_ids;
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      if (counts[i][j] > 0 && row_map[i] == SIZE_MAX) {
        row_map[i] = row_ids.size();
        row_ids.push_back(row_id(i));
      }
  for (std::size_t j = 0; j < cols; ++j)
    for (std::size_t i = 0; i < rows; ++i)
      if (counts[i][j] > 0 && col_map[j] == SIZE_MAX) {
        col_map[j] = col_ids.size();
        col_ids.push_back(col_id(j));
      }
  std::vector<polarsample::MatrixEntry> entries;
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      if (counts[i][j] > 0) entries.push_back({row_map[i], col_map[j], counts[i][j]});
  return polarsample::InteractionMatrix::from_entries(row_ids, col_ids, entries);
}

/// Events reproducing a dense count matrix (row i retweets column j count times).
inline std::vector<polarsample::RetweetEvent> events_from_counts(
    const std::vector<std::vector<std::uint64_t>>& counts) {
  std::vector<polarsample::RetweetEvent> events;
  std::size_t t = 0;
  for (std::size_t i = 0; i < counts.size(); ++i)
    for (std::size_t j = 0; j < counts[i].size(); ++j)
      for (std::uint64_t k = 0; k < counts[i][j]; ++k, ++t)
        events.push_back(event("t" + std::to_string(t), row_id(i), col_id(j),
                               static_cast<std::int64_t>(t)));
  return events;
}

}  // namespace testing
