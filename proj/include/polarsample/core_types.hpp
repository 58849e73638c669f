#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace polarsample {

enum class ErrorCode {
  MissingField,
  InvalidField,
  SelfRetweetRejected,
  IoError,
  FormatError,
  EmptyInput,
  InvalidArgument,
  NoSeedsPresent,
  EmptyMatrix,
  MatrixDegenerate,
  NumericalFailure,
  DegenerateSpectrum,
  ZeroVariance,
  AnchorAbsent,
  TooFewSamples,
  EmptySample,
  EmptyGraph,
  ReferenceFailed,
  NoScoredTweets,
  ConfigInvalid,
};

/// snake_case name used in error JSON and sweep tables.
std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Seeded generator identified by (seed, stream_id).
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard; every derived quantity (uniforms, indices, normals) is computed
/// here rather than through <random> distributions, which are allowed to
/// differ between standard library implementations.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform integer on [0, n); n must be positive.
  std::uint64_t uniform_index(std::uint64_t n);
  double exponential();
  double normal();

  /// Independent child stream sharing this seed. Children depend only on
  /// (seed, stream_id, index), never on how many draws were taken.
  RngStream derive(std::uint64_t index) const;

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
};

struct RetweetEvent {
  std::string tweet_id;
  std::string retweeter_id;
  std::string influencer_id;
  std::int64_t timestamp = 0;
  std::string text;

  friend bool operator==(const RetweetEvent&, const RetweetEvent&) = default;
};

/// Canonical order: timestamp, then tweet_id.
bool canonical_less(const RetweetEvent& a, const RetweetEvent& b);

enum class SampleKind { Random, Keyword, Seed, TopSeedFraction };

std::string_view to_string(SampleKind kind);
SampleKind sample_kind_from_string(std::string_view name);

struct SampleSpec {
  SampleKind kind = SampleKind::Random;
  double fraction = 1.0;
  std::vector<std::string> keywords;
  std::set<std::string> seed_ids;
  std::uint64_t rng_seed = 0;
  std::uint64_t rng_stream = 0;

  /// Throws Error(InvalidArgument) when the kind-specific fields are missing.
  void validate() const;

  friend bool operator==(const SampleSpec&, const SampleSpec&) = default;
};

class EventSet {
 public:
  EventSet() = default;
  /// Sorts the events into canonical order (stable for exact duplicates).
  explicit EventSet(std::vector<RetweetEvent> events,
                    std::vector<SampleSpec> provenance = {});

  const std::vector<RetweetEvent>& events() const noexcept { return events_; }
  const std::vector<SampleSpec>& provenance() const noexcept {
    return provenance_;
  }
  std::size_t size() const noexcept { return events_.size(); }
  bool empty() const noexcept { return events_.empty(); }

  /// Builds a derived set from events already in canonical order.
  EventSet derived(std::vector<RetweetEvent> kept, SampleSpec step) const;

  friend bool operator==(const EventSet&, const EventSet&) = default;

 private:
  std::vector<RetweetEvent> events_;
  std::vector<SampleSpec> provenance_;
};

using RawRecord = std::map<std::string, std::string>;

struct IngestOptions {
  bool allow_self_retweets = false;
};

/// Missing timestamp defaults to 0 and missing text to "".
RetweetEvent validate_event(const RawRecord& raw,
                            const IngestOptions& options = {});

}  // namespace polarsample
