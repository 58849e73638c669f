#pragma once

#include <cstddef>
#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "polarsample/core_types.hpp"

namespace polarsample {

enum class InputFormat { JsonLines, Csv };

InputFormat input_format_from_string(std::string_view name);
std::string_view to_string(InputFormat format);

enum class MatchMode { SubstringWordBoundary, PlainSubstring };

MatchMode match_mode_from_string(std::string_view name);
std::string_view to_string(MatchMode mode);

/// Locale-independent Unicode simple case folding of a UTF-8 string.
/// Malformed byte sequences are replaced with U+FFFD.
std::string fold_case(std::string_view utf8);

/// Case-folded, de-duplicated keyword terms with a matching rule.
///
/// SubstringWordBoundary follows regex `\b` semantics on the term's edges:
/// an edge that is a word character must sit next to a non-word character
/// (or the end of the text). Edges like '#' need no boundary.
class KeywordSet {
 public:
  explicit KeywordSet(std::vector<std::string> terms,
                      MatchMode mode = MatchMode::SubstringWordBoundary);

  const std::vector<std::string>& terms() const noexcept { return terms_; }
  MatchMode mode() const noexcept { return mode_; }
  std::size_t size() const noexcept { return terms_.size(); }

  /// True when the text contains at least one term.
  bool matches(std::string_view text) const;
  /// Indices of the terms contained in the text, ascending.
  std::vector<std::size_t> matching_terms(std::string_view text) const;

 private:
  bool term_in(std::size_t term, std::u32string_view folded) const;

  std::vector<std::string> terms_;
  std::vector<std::u32string> folded_terms_;
  MatchMode mode_;
};

struct LineError {
  std::size_t line = 0;
  ErrorCode code = ErrorCode::FormatError;
  std::string message;
};

struct ParseResult {
  EventSet events;
  std::size_t skipped_count = 0;
  std::vector<LineError> errors;
};

/// Reads every valid record; bad lines are tallied in `errors`.
/// Throws IoError when the file cannot be read and EmptyInput when no
/// record survives.
ParseResult parse_events(const std::filesystem::path& path, InputFormat format,
                         const IngestOptions& options = {});

/// Concatenates several files (e.g. daily dumps) into one canonical set.
ParseResult parse_event_files(const std::vector<std::filesystem::path>& paths,
                              InputFormat format,
                              const IngestOptions& options = {});

EventSet filter_by_keywords(const EventSet& events, const KeywordSet& keywords);

EventSet filter_by_seeds(const EventSet& events,
                         const std::set<std::string>& seeds);

/// The ceil(fraction * k) seeds with most retweets among the k seeds that
/// receive any, ranked by count descending then id ascending.
std::vector<std::string> top_retweeted_seeds(const EventSet& events,
                                             const std::set<std::string>& seeds,
                                             double fraction);

/// Uniform sample without replacement of round-half-up(fraction * n) events.
EventSet random_sample(const EventSet& events, double fraction,
                       const RngStream& rng);

std::size_t sample_size(std::size_t n, double fraction);

/// One term per line; blank lines and lines starting with ';' are skipped.
std::vector<std::string> load_keyword_file(const std::filesystem::path& path);
/// One account id per line; blank lines and ';' comments skipped.
std::set<std::string> load_id_file(const std::filesystem::path& path);

/// RFC-4180 record splitter. Returns false on unbalanced quotes.
bool split_csv_record(std::string_view line, std::vector<std::string>& fields);

}  // namespace polarsample
