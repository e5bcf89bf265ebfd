#pragma once

#include <compare>
#include <cstdint>
#include <vector>

#include "ssjoin/ingest.hpp"
#include "ssjoin/model.hpp"

namespace ssjoin {

struct SeqTuple {
  std::uint32_t set_index{0};
  std::uint32_t set_size{0};

  friend auto operator<=>(const SeqTuple&, const SeqTuple&) = default;
};

// seq(a): every set containing the element, sizes non-increasing, ties by
// ascending set index.
struct ElementSequence {
  ElementId element{0};
  std::vector<SeqTuple> tuples;
};

// Entries ordered by descending sequence length, ties by element id.
struct ReorganizedCollection {
  std::vector<ElementSequence> entries;
};

ReorganizedCollection reorganize(const Collection& c);
ReorganizedCollection reorganize_records(const std::vector<SetRecord>& records);
ReorganizedCollection reorganize_records(
    const std::vector<const SetRecord*>& records);

}  // namespace ssjoin
