#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "ssjoin/model.hpp"

namespace ssjoin {

using SizeHistogram = std::map<std::uint32_t, std::uint64_t>;

struct Collection {
  CollectionTag tag{CollectionTag::S};
  std::vector<SetRecord> records;
  SizeHistogram size_histogram;
  std::unordered_map<ElementId, std::uint64_t> element_frequency;
  std::uint64_t empty_records_dropped{0};
  std::uint64_t duplicate_records_dropped{0};

  std::uint32_t min_size() const;
  std::uint32_t max_size() const;
  std::uint64_t total_elements() const;  // sum of |s| over records
};

struct LoadOptions {
  bool dedup_sets{false};
  Rational sample_fraction{1, 1};
  std::uint64_t seed{0};
};

// One set per non-empty line, whitespace-separated non-negative integers.
// Duplicate elements within a line are removed and elements sorted. Retained
// records get ids 0..n-1 in file order.
Collection load_collection(const std::string& path, CollectionTag tag,
                           const LoadOptions& options = {});

// Same pipeline over in-memory element lists (tests, generators).
Collection make_collection(CollectionTag tag,
                           std::vector<std::vector<ElementId>> sets,
                           const LoadOptions& options = {});

void write_collection(const Collection& c, const std::string& path);

struct StatsReport {
  std::uint64_t n_sets{0};
  std::string avg_size{"0.000"};  // 3 decimals, round-half-even
  std::uint32_t min_size{0};
  std::uint32_t max_size{0};
  std::uint64_t n_distinct_elements{0};
  SizeHistogram size_histogram;
  // frequency value -> number of elements occurring that often
  std::map<std::uint64_t, std::uint64_t> element_frequency_histogram;
};

StatsReport stats(const Collection& c);
std::string stats_json(const StatsReport& report);

}  // namespace ssjoin
