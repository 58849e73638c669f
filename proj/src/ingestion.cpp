#include "polarsample/ingestion.hpp"

#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <unordered_set>

#include <nlohmann/json.hpp>

namespace polarsample {
namespace {

using nlohmann::json;

std::u32string fold_to_u32(std::string_view utf8) {
  std::u32string out;
  out.reserve(utf8.size());
  const auto* bytes = reinterpret_cast<const std::uint8_t*>(utf8.data());
  const auto length = static_cast<std::int32_t>(utf8.size());
  std::int32_t i = 0;
  while (i < length) {
    UChar32 c;
    U8_NEXT(bytes, i, length, c);
    if (c < 0) c = 0xFFFD;
    out.push_back(static_cast<char32_t>(u_foldCase(c, U_FOLD_CASE_DEFAULT)));
  }
  return out;
}

std::string to_utf8(std::u32string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char32_t c : text) {
    std::uint8_t buf[4];
    std::int32_t len = 0;
    U8_APPEND_UNSAFE(buf, len, static_cast<UChar32>(c));
    out.append(reinterpret_cast<const char*>(buf), static_cast<std::size_t>(len));
  }
  return out;
}

bool is_word_char(char32_t c) {
  return c == U'_' || u_isalnum(static_cast<UChar32>(c)) ||
         u_hasBinaryProperty(static_cast<UChar32>(c), UCHAR_ALPHABETIC);
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

RawRecord record_from_json(const json& object) {
  if (!object.is_object()) throw Error(ErrorCode::FormatError, "not a JSON object");
  RawRecord raw;
  for (const auto& [key, value] : object.items()) {
    if (value.is_string()) {
      raw[key] = value.get<std::string>();
    } else if (value.is_number_integer()) {
      raw[key] = value.dump();
    } else if (value.is_null()) {
      continue;
    } else {
      throw Error(ErrorCode::InvalidField, "field '" + key + "' has unsupported type");
    }
  }
  return raw;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  return in;
}

void parse_jsonl(std::istream& in, const IngestOptions& options,
                 std::vector<RetweetEvent>& events, ParseResult& result) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      json object;
      try {
        object = json::parse(line);
      } catch (const json::parse_error& e) {
        throw Error(ErrorCode::FormatError, e.what());
      }
      events.push_back(validate_event(record_from_json(object), options));
    } catch (const Error& e) {
      result.errors.push_back({line_no, e.code(), e.what()});
    }
  }
}

std::size_t count_quotes(std::string_view s) {
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '"'));
}

void parse_csv(std::istream& in, const IngestOptions& options,
               std::vector<RetweetEvent>& events, ParseResult& result) {
  std::vector<std::string> header;
  std::vector<std::string> fields;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;

  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t record_line = line_no;
    std::string record = line;
    // A quoted field may span physical lines.
    while (count_quotes(record) % 2 == 1 && std::getline(in, line)) {
      ++line_no;
      record += '\n';
      record += line;
    }
    if (!record.empty() && record.back() == '\r') record.pop_back();
    if (trim(record).empty()) continue;

    if (!split_csv_record(record, fields)) {
      result.errors.push_back({record_line, ErrorCode::FormatError, "unbalanced quotes"});
      continue;
    }
    if (!have_header) {
      header.clear();
      for (auto& f : fields) header.push_back(trim(f));
      have_header = true;
      continue;
    }
    if (fields.size() != header.size()) {
      result.errors.push_back({record_line, ErrorCode::FormatError,
                               "expected " + std::to_string(header.size()) +
                                   " fields, found " + std::to_string(fields.size())});
      continue;
    }
    RawRecord raw;
    for (std::size_t i = 0; i < header.size(); ++i) raw[header[i]] = fields[i];
    try {
      events.push_back(validate_event(raw, options));
    } catch (const Error& e) {
      result.errors.push_back({record_line, e.code(), e.what()});
    }
  }
}

}  // namespace

InputFormat input_format_from_string(std::string_view name) {
  if (name == "jsonl" || name == "jsonlines" || name == "json_lines") {
    return InputFormat::JsonLines;
  }
  if (name == "csv") return InputFormat::Csv;
  throw Error(ErrorCode::InvalidArgument, "unknown input format '" + std::string(name) + "'");
}

std::string_view to_string(InputFormat format) {
  return format == InputFormat::Csv ? "csv" : "jsonl";
}

MatchMode match_mode_from_string(std::string_view name) {
  if (name == "word" || name == "word_boundary") return MatchMode::SubstringWordBoundary;
  if (name == "substring" || name == "plain") return MatchMode::PlainSubstring;
  throw Error(ErrorCode::InvalidArgument, "unknown match mode '" + std::string(name) + "'");
}

std::string_view to_string(MatchMode mode) {
  return mode == MatchMode::PlainSubstring ? "substring" : "word";
}

std::string fold_case(std::string_view utf8) { return to_utf8(fold_to_u32(utf8)); }

KeywordSet::KeywordSet(std::vector<std::string> terms, MatchMode mode) : mode_(mode) {
  std::unordered_set<std::u32string> seen;
  for (const auto& raw : terms) {
    std::u32string folded = fold_to_u32(trim(raw));
    if (folded.empty()) throw Error(ErrorCode::InvalidArgument, "empty keyword term");
    if (!seen.insert(folded).second) continue;
    terms_.push_back(to_utf8(folded));
    folded_terms_.push_back(std::move(folded));
  }
  if (terms_.empty()) throw Error(ErrorCode::InvalidArgument, "keyword set is empty");
}

bool KeywordSet::term_in(std::size_t term, std::u32string_view folded) const {
  const std::u32string& needle = folded_terms_[term];
  if (mode_ == MatchMode::PlainSubstring) {
    return folded.find(needle) != std::u32string_view::npos;
  }
  const bool left_word = is_word_char(needle.front());
  const bool right_word = is_word_char(needle.back());
  for (std::size_t pos = folded.find(needle); pos != std::u32string_view::npos;
       pos = folded.find(needle, pos + 1)) {
    const std::size_t end = pos + needle.size();
    const bool left_ok = !left_word || pos == 0 || !is_word_char(folded[pos - 1]);
    const bool right_ok = !right_word || end == folded.size() || !is_word_char(folded[end]);
    if (left_ok && right_ok) return true;
  }
  return false;
}

bool KeywordSet::matches(std::string_view text) const {
  const std::u32string folded = fold_to_u32(text);
  for (std::size_t t = 0; t < folded_terms_.size(); ++t) {
    if (term_in(t, folded)) return true;
  }
  return false;
}

std::vector<std::size_t> KeywordSet::matching_terms(std::string_view text) const {
  const std::u32string folded = fold_to_u32(text);
  std::vector<std::size_t> out;
  for (std::size_t t = 0; t < folded_terms_.size(); ++t) {
    if (term_in(t, folded)) out.push_back(t);
  }
  return out;
}

bool split_csv_record(std::string_view line, std::vector<std::string>& fields) {
  fields.clear();
  std::string field;
  bool in_quotes = false;
  bool field_started_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      if (!field.empty() || field_started_quoted) return false;
      in_quotes = true;
      field_started_quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
      field_started_quoted = false;
    } else {
      if (field_started_quoted) return false;
      field += c;
    }
  }
  if (in_quotes) return false;
  fields.push_back(std::move(field));
  return true;
}

ParseResult parse_event_files(const std::vector<std::filesystem::path>& paths,
                              InputFormat format, const IngestOptions& options) {
  ParseResult result;
  std::vector<RetweetEvent> events;
  for (const auto& path : paths) {
    std::ifstream in = open_input(path);
    if (format == InputFormat::JsonLines) {
      parse_jsonl(in, options, events, result);
    } else {
      parse_csv(in, options, events, result);
    }
  }
  result.skipped_count = result.errors.size();
  if (events.empty()) {
    throw Error(ErrorCode::EmptyInput, "no valid records in input");
  }
  result.events = EventSet(std::move(events));
  return result;
}

ParseResult parse_events(const std::filesystem::path& path, InputFormat format,
                         const IngestOptions& options) {
  return parse_event_files({path}, format, options);
}

EventSet filter_by_keywords(const EventSet& events, const KeywordSet& keywords) {
  std::vector<RetweetEvent> kept;
  for (const auto& e : events.events()) {
    if (keywords.matches(e.text)) kept.push_back(e);
  }
  SampleSpec step;
  step.kind = SampleKind::Keyword;
  step.keywords = keywords.terms();
  return events.derived(std::move(kept), std::move(step));
}

EventSet filter_by_seeds(const EventSet& events, const std::set<std::string>& seeds) {
  if (seeds.empty()) throw Error(ErrorCode::InvalidArgument, "empty seed set");
  std::vector<RetweetEvent> kept;
  for (const auto& e : events.events()) {
    if (seeds.contains(e.influencer_id)) kept.push_back(e);
  }
  SampleSpec step;
  step.kind = SampleKind::Seed;
  step.seed_ids = seeds;
  return events.derived(std::move(kept), std::move(step));
}

std::vector<std::string> top_retweeted_seeds(const EventSet& events,
                                             const std::set<std::string>& seeds,
                                             double fraction) {
  if (seeds.empty()) throw Error(ErrorCode::InvalidArgument, "empty seed set");
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "fraction must lie in (0, 1]");
  }
  std::map<std::string, std::size_t> counts;
  for (const auto& e : events.events()) {
    if (seeds.contains(e.influencer_id)) ++counts[e.influencer_id];
  }
  if (counts.empty()) throw Error(ErrorCode::NoSeedsPresent, "no seed receives a retweet");

  std::vector<std::pair<std::string, std::size_t>> ranked(counts.begin(), counts.end());
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });

  // The slack absorbs representation error, e.g. 0.1 * 30 = 3.0000000000000004.
  auto keep = static_cast<std::size_t>(
      std::ceil(fraction * static_cast<double>(ranked.size()) - 1e-9));
  keep = std::clamp<std::size_t>(keep, 1, ranked.size());
  std::vector<std::string> out;
  out.reserve(keep);
  for (std::size_t i = 0; i < keep; ++i) out.push_back(ranked[i].first);
  return out;
}

std::size_t sample_size(std::size_t n, double fraction) {
  return static_cast<std::size_t>(
      std::floor(fraction * static_cast<double>(n) + 0.5 + 1e-9));
}

EventSet random_sample(const EventSet& events, double fraction, const RngStream& rng) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "fraction must lie in (0, 1]");
  }
  const std::size_t n = events.size();
  const std::size_t k = std::min(n, sample_size(n, fraction));

  RngStream draw = rng;
  std::vector<std::size_t> index(n);
  std::iota(index.begin(), index.end(), std::size_t{0});
  // Partial Fisher-Yates: the first k slots are a uniform k-subset.
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(draw.uniform_index(n - i));
    std::swap(index[i], index[j]);
  }
  index.resize(k);
  std::sort(index.begin(), index.end());

  std::vector<RetweetEvent> kept;
  kept.reserve(k);
  for (std::size_t i : index) kept.push_back(events.events()[i]);

  SampleSpec step;
  step.kind = SampleKind::Random;
  step.fraction = fraction;
  step.rng_seed = rng.seed();
  step.rng_stream = rng.stream_id();
  return events.derived(std::move(kept), std::move(step));
}

std::vector<std::string> load_keyword_file(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  std::vector<std::string> terms;
  std::string line;
  while (std::getline(in, line)) {
    std::string term = trim(line);
    if (term.empty() || term.front() == ';') continue;
    terms.push_back(std::move(term));
  }
  return terms;
}

std::set<std::string> load_id_file(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  std::set<std::string> ids;
  std::string line;
  while (std::getline(in, line)) {
    std::string id = trim(line);
    if (id.empty() || id.front() == ';') continue;
    ids.insert(std::move(id));
  }
  return ids;
}

}  // namespace polarsample
