#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ssjoin {

using ElementId = std::uint32_t;

enum class CollectionTag : std::uint8_t { R, S };

inline char tag_letter(CollectionTag tag) {
  return tag == CollectionTag::R ? 'R' : 'S';
}

struct SetId {
  CollectionTag tag{CollectionTag::R};
  std::uint32_t index{0};

  friend bool operator==(const SetId& a, const SetId& b) {
    return a.tag == b.tag && a.index == b.index;
  }
};

// A set: distinct element ids, strictly ascending.
struct SetRecord {
  SetId id;
  std::vector<ElementId> elements;

  std::uint32_t size() const {
    return static_cast<std::uint32_t>(elements.size());
  }
};

enum class Coefficient { Jaccard, Overlap, Cosine, Dice };

const char* coefficient_name(Coefficient c);
std::optional<Coefficient> parse_coefficient(const std::string& name);

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CorruptionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RoutingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Rational {
  std::uint64_t num{0};
  std::uint64_t den{1};

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num == b.num && a.den == b.den;
  }
};

Rational reduced(std::uint64_t num, std::uint64_t den);

// Similarity threshold t, kept as an exact rational so ceil/floor bounds and
// verification comparisons never go through floating point.
struct Threshold {
  std::uint64_t num{0};
  std::uint64_t den{1};
  std::string text;  // as given on input, for echoing back

  // Parses a plain decimal such as "0.6", ".75", "1", "3".
  static Threshold parse(const std::string& text);
  static Threshold from_ratio(std::uint64_t num, std::uint64_t den);

  bool is_integer() const { return num % den == 0; }
  bool valid_for(Coefficient c) const;
  void require_valid_for(Coefficient c) const;  // throws ParseError

  friend bool operator==(const Threshold& a, const Threshold& b) {
    return a.num == b.num && a.den == b.den;
  }
};

// [lb, ub] window on |s|; ub absent means unbounded (Overlap).
struct LengthBounds {
  std::uint64_t lb{1};
  std::optional<std::uint64_t> ub;

  bool contains(std::uint64_t size) const {
    return size >= lb && (!ub || size <= *ub);
  }
};

LengthBounds length_bounds(Coefficient coeff, std::uint64_t r_size,
                           const Threshold& t);

bool meets_threshold(Coefficient coeff, std::uint64_t r_size,
                     std::uint64_t s_size, std::uint64_t intersection,
                     const Threshold& t);

// A similarity value kept in terms of (|r|, |s|, f) so comparisons against t
// stay exact. Cosine is irrational in general and only supports comparison
// and fixed-point printing.
struct Score {
  Coefficient kind{Coefficient::Jaccard};
  std::uint64_t r_size{0};
  std::uint64_t s_size{0};
  std::uint64_t intersection{0};

  bool meets(const Threshold& t) const {
    return meets_threshold(kind, r_size, s_size, intersection, t);
  }

  // Exact value for Jaccard/Overlap/Dice; for Cosine only when |r|*|s| is a
  // perfect square. Throws std::domain_error otherwise.
  Rational exact_rational() const;

  // Fixed point with 6 places, round-half-even.
  std::string decimal6() const;

  friend bool operator==(const Score& a, const Score& b) {
    return a.kind == b.kind && a.r_size == b.r_size && a.s_size == b.s_size &&
           a.intersection == b.intersection;
  }
};

Score similarity(Coefficient coeff, std::uint64_t r_size, std::uint64_t s_size,
                 std::uint64_t intersection);

// num/den rendered with `places` fixed decimal places, round-half-even.
std::string format_decimal(std::uint64_t num, std::uint64_t den,
                           unsigned places);

// One verified result pair. Scores for equal (r, s, f) are equal, so
// comparisons go through indices plus the intersection size.
struct ResultPair {
  std::uint32_t r_index{0};
  std::uint32_t s_index{0};
  Score score;

  friend bool operator==(const ResultPair& a, const ResultPair& b) {
    return a.r_index == b.r_index && a.s_index == b.s_index &&
           a.score == b.score;
  }
  friend bool operator<(const ResultPair& a, const ResultPair& b) {
    if (a.r_index != b.r_index) return a.r_index < b.r_index;
    return a.s_index < b.s_index;
  }
};

}  // namespace ssjoin
