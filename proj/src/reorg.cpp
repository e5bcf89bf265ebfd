#include "ssjoin/reorg.hpp"

#include <algorithm>
#include <unordered_map>

namespace ssjoin {

ReorganizedCollection reorganize_records(
    const std::vector<const SetRecord*>& records) {
  // Process records in (size desc, id asc) order so each element's tuple
  // list comes out already ordered; one pass sizes every list exactly.
  std::vector<const SetRecord*> order = records;
  std::sort(order.begin(), order.end(),
            [](const SetRecord* a, const SetRecord* b) {
              if (a->size() != b->size()) return a->size() > b->size();
              return a->id.index < b->id.index;
            });

  std::unordered_map<ElementId, std::uint32_t> slot_of;
  std::vector<std::uint32_t> tuple_count;
  for (const SetRecord* rec : order) {
    for (ElementId a : rec->elements) {
      const auto [it, fresh] = slot_of.try_emplace(
          a, static_cast<std::uint32_t>(tuple_count.size()));
      if (fresh)
        tuple_count.push_back(1);
      else
        tuple_count[it->second] += 1;
    }
  }

  ReorganizedCollection out;
  out.entries.resize(slot_of.size());
  for (const auto& [element, slot] : slot_of) {
    out.entries[slot].element = element;
    out.entries[slot].tuples.reserve(tuple_count[slot]);
  }
  for (const SetRecord* rec : order)
    for (ElementId a : rec->elements)
      out.entries[slot_of[a]].tuples.push_back(
          SeqTuple{rec->id.index, rec->size()});

  std::sort(out.entries.begin(), out.entries.end(),
            [](const ElementSequence& a, const ElementSequence& b) {
              if (a.tuples.size() != b.tuples.size())
                return a.tuples.size() > b.tuples.size();
              return a.element < b.element;
            });
  return out;
}

ReorganizedCollection reorganize_records(
    const std::vector<SetRecord>& records) {
  std::vector<const SetRecord*> pointers;
  pointers.reserve(records.size());
  for (const SetRecord& rec : records) pointers.push_back(&rec);
  return reorganize_records(pointers);
}

ReorganizedCollection reorganize(const Collection& c) {
  return reorganize_records(c.records);
}

}  // namespace ssjoin
