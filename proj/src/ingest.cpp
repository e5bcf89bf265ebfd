#include "ssjoin/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <random>
#include <set>

#include <json.hpp>

namespace ssjoin {

namespace {

using ordered_json = nlohmann::ordered_json;

// Deterministic keep/drop with probability num/den: one mt19937_64 draw per
// candidate record, compared in 64-bit fixed point.
struct Sampler {
  std::mt19937_64 rng;
  std::uint64_t num;
  std::uint64_t den;

  Sampler(std::uint64_t seed, const Rational& fraction)
      : rng(seed), num(fraction.num), den(fraction.den) {}

  bool keep() {
    const std::uint64_t draw = rng();
    const auto scaled = static_cast<unsigned __int128>(draw) * den >> 64;
    return static_cast<std::uint64_t>(scaled) < num;
  }
};

bool parse_line(const std::string& line, std::size_t line_no,
                std::vector<ElementId>& out) {
  out.clear();
  std::size_t i = 0;
  const std::size_t n = line.size();
  while (i < n) {
    while (i < n && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i >= n) break;
    std::uint64_t value = 0;
    std::size_t start = i;
    while (i < n && !std::isspace(static_cast<unsigned char>(line[i]))) {
      char c = line[i];
      if (c < '0' || c > '9')
        throw ParseError("line " + std::to_string(line_no) +
                         ": non-integer token '" +
                         line.substr(start, i - start + 1) + "'");
      value = value * 10 + static_cast<std::uint64_t>(c - '0');
      if (value > 0xffffffffULL)
        throw ParseError("line " + std::to_string(line_no) +
                         ": element id out of range");
      ++i;
    }
    out.push_back(static_cast<ElementId>(value));
  }
  return !out.empty();
}

void finalize(Collection& c) {
  for (const SetRecord& rec : c.records) {
    c.size_histogram[rec.size()] += 1;
    for (ElementId a : rec.elements) c.element_frequency[a] += 1;
  }
}

}  // namespace

std::uint32_t Collection::min_size() const {
  return size_histogram.empty() ? 0 : size_histogram.begin()->first;
}

std::uint32_t Collection::max_size() const {
  return size_histogram.empty() ? 0 : size_histogram.rbegin()->first;
}

std::uint64_t Collection::total_elements() const {
  std::uint64_t total = 0;
  for (const auto& [size, count] : size_histogram)
    total += static_cast<std::uint64_t>(size) * count;
  return total;
}

Collection make_collection(CollectionTag tag,
                           std::vector<std::vector<ElementId>> sets,
                           const LoadOptions& options) {
  Collection c;
  c.tag = tag;
  Sampler sampler(options.seed, options.sample_fraction);
  std::set<std::vector<ElementId>> seen;

  for (auto& elements : sets) {
    std::sort(elements.begin(), elements.end());
    elements.erase(std::unique(elements.begin(), elements.end()),
                   elements.end());
    if (elements.empty()) {
      ++c.empty_records_dropped;
      continue;
    }
    if (!sampler.keep()) continue;
    if (options.dedup_sets && !seen.insert(elements).second) {
      ++c.duplicate_records_dropped;
      continue;
    }
    SetRecord rec;
    rec.id = SetId{tag, static_cast<std::uint32_t>(c.records.size())};
    rec.elements = std::move(elements);
    c.records.push_back(std::move(rec));
  }
  finalize(c);
  return c;
}

Collection load_collection(const std::string& path, CollectionTag tag,
                           const LoadOptions& options) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");

  std::vector<std::vector<ElementId>> sets;
  std::string line;
  std::vector<ElementId> scratch;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (parse_line(line, line_no, scratch)) sets.push_back(scratch);
  }
  return make_collection(tag, std::move(sets), options);
}

void write_collection(const Collection& c, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open '" + path + "' for writing");
  for (const SetRecord& rec : c.records) {
    for (std::size_t i = 0; i < rec.elements.size(); ++i) {
      if (i) out << ' ';
      out << rec.elements[i];
    }
    out << '\n';
  }
}

StatsReport stats(const Collection& c) {
  StatsReport report;
  report.n_sets = c.records.size();
  report.min_size = c.min_size();
  report.max_size = c.max_size();
  report.n_distinct_elements = c.element_frequency.size();
  report.size_histogram = c.size_histogram;
  if (report.n_sets > 0)
    report.avg_size = format_decimal(c.total_elements(), report.n_sets, 3);
  for (const auto& [element, freq] : c.element_frequency)
    report.element_frequency_histogram[freq] += 1;
  return report;
}

std::string stats_json(const StatsReport& report) {
  ordered_json j;
  j["n_sets"] = report.n_sets;
  j["avg_size"] = ordered_json::parse(report.avg_size);
  j["min_size"] = report.min_size;
  j["max_size"] = report.max_size;
  j["n_distinct_elements"] = report.n_distinct_elements;
  ordered_json sizes = ordered_json::object();
  for (const auto& [size, count] : report.size_histogram)
    sizes[std::to_string(size)] = count;
  j["size_histogram"] = sizes;
  ordered_json freqs = ordered_json::object();
  for (const auto& [freq, count] : report.element_frequency_histogram)
    freqs[std::to_string(freq)] = count;
  j["element_frequency_histogram"] = freqs;
  return j.dump(2);
}

}  // namespace ssjoin
