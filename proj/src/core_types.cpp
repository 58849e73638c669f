#include "polarsample/core_types.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>

namespace polarsample {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MissingField: return "missing_field";
    case ErrorCode::InvalidField: return "invalid_field";
    case ErrorCode::SelfRetweetRejected: return "self_retweet_rejected";
    case ErrorCode::IoError: return "io_error";
    case ErrorCode::FormatError: return "format_error";
    case ErrorCode::EmptyInput: return "empty_input";
    case ErrorCode::InvalidArgument: return "invalid_argument";
    case ErrorCode::NoSeedsPresent: return "no_seeds_present";
    case ErrorCode::EmptyMatrix: return "empty_matrix";
    case ErrorCode::MatrixDegenerate: return "matrix_degenerate";
    case ErrorCode::NumericalFailure: return "numerical_failure";
    case ErrorCode::DegenerateSpectrum: return "degenerate_spectrum";
    case ErrorCode::ZeroVariance: return "zero_variance";
    case ErrorCode::AnchorAbsent: return "anchor_absent";
    case ErrorCode::TooFewSamples: return "too_few_samples";
    case ErrorCode::EmptySample: return "empty_sample";
    case ErrorCode::EmptyGraph: return "empty_graph";
    case ErrorCode::ReferenceFailed: return "reference_failed";
    case ErrorCode::NoScoredTweets: return "no_scored_tweets";
    case ErrorCode::ConfigInvalid: return "config_invalid";
  }
  return "unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code) {}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed),
      stream_id_(stream_id),
      engine_(splitmix64(seed ^ splitmix64(stream_id ^ 0x5851f42d4c957f2dULL))) {}

double RngStream::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::uint64_t RngStream::uniform_index(std::uint64_t n) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "uniform_index(0)");
  // Rejection on the top of the range removes modulo bias.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % n;
}

double RngStream::exponential() {
  // 1 - u lies in (0, 1].
  return -std::log1p(-uniform());
}

double RngStream::normal() {
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

RngStream RngStream::derive(std::uint64_t index) const {
  return RngStream(seed_, splitmix64(stream_id_ * 0x9e3779b97f4a7c15ULL + index + 1));
}

bool canonical_less(const RetweetEvent& a, const RetweetEvent& b) {
  if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
  return a.tweet_id < b.tweet_id;
}

std::string_view to_string(SampleKind kind) {
  switch (kind) {
    case SampleKind::Random: return "random";
    case SampleKind::Keyword: return "keyword";
    case SampleKind::Seed: return "seed";
    case SampleKind::TopSeedFraction: return "top_seed_fraction";
  }
  return "unknown";
}

SampleKind sample_kind_from_string(std::string_view name) {
  if (name == "random") return SampleKind::Random;
  if (name == "keyword") return SampleKind::Keyword;
  if (name == "seed") return SampleKind::Seed;
  if (name == "top_seed_fraction") return SampleKind::TopSeedFraction;
  throw Error(ErrorCode::InvalidArgument,
              "unknown sample kind '" + std::string(name) + "'");
}

void SampleSpec::validate() const {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "fraction must lie in (0, 1]");
  }
  if (kind == SampleKind::Keyword && keywords.empty()) {
    throw Error(ErrorCode::InvalidArgument, "keyword sample without keywords");
  }
  if ((kind == SampleKind::Seed || kind == SampleKind::TopSeedFraction) &&
      seed_ids.empty()) {
    throw Error(ErrorCode::InvalidArgument, "seed sample without seed ids");
  }
}

EventSet::EventSet(std::vector<RetweetEvent> events,
                   std::vector<SampleSpec> provenance)
    : events_(std::move(events)), provenance_(std::move(provenance)) {
  std::stable_sort(events_.begin(), events_.end(), canonical_less);
}

EventSet EventSet::derived(std::vector<RetweetEvent> kept,
                           SampleSpec step) const {
  EventSet out;
  out.events_ = std::move(kept);
  out.provenance_ = provenance_;
  out.provenance_.push_back(std::move(step));
  return out;
}

RetweetEvent validate_event(const RawRecord& raw, const IngestOptions& options) {
  auto required = [&](const char* name) -> const std::string& {
    auto it = raw.find(name);
    if (it == raw.end() || it->second.empty()) {
      throw Error(ErrorCode::MissingField, name);
    }
    return it->second;
  };

  RetweetEvent event;
  event.tweet_id = required("tweet_id");
  event.retweeter_id = required("retweeter_id");
  event.influencer_id = required("influencer_id");

  if (auto it = raw.find("timestamp"); it != raw.end() && !it->second.empty()) {
    const std::string& value = it->second;
    const char* end = value.data() + value.size();
    auto [ptr, ec] = std::from_chars(value.data(), end, event.timestamp);
    if (ec != std::errc() || ptr != end) {
      throw Error(ErrorCode::InvalidField, "timestamp '" + value + "'");
    }
  }
  if (auto it = raw.find("text"); it != raw.end()) event.text = it->second;

  if (!options.allow_self_retweets &&
      event.retweeter_id == event.influencer_id) {
    throw Error(ErrorCode::SelfRetweetRejected, event.retweeter_id);
  }
  return event;
}

}  // namespace polarsample
