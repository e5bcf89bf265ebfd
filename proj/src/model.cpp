#include "ssjoin/model.hpp"

#include <cctype>
#include <numeric>

namespace ssjoin {

namespace {

using u128 = unsigned __int128;

std::uint64_t ceil_div(u128 a, u128 b) {
  return static_cast<std::uint64_t>((a + b - 1) / b);
}

std::uint64_t floor_div(u128 a, u128 b) {
  return static_cast<std::uint64_t>(a / b);
}

// Largest m with m*m*d <= n. Values stay far below the u128 range because
// every caller works with set sizes and 6-place scale factors.
std::uint64_t isqrt_ratio(u128 n, u128 d, std::uint64_t hi) {
  std::uint64_t lo = 0;
  while (lo < hi) {
    std::uint64_t mid = lo + (hi - lo + 1) / 2;
    if (static_cast<u128>(mid) * mid * d <= n)
      lo = mid;
    else
      hi = mid - 1;
  }
  return lo;
}

}  // namespace

const char* coefficient_name(Coefficient c) {
  switch (c) {
    case Coefficient::Jaccard: return "jaccard";
    case Coefficient::Overlap: return "overlap";
    case Coefficient::Cosine: return "cosine";
    case Coefficient::Dice: return "dice";
  }
  return "?";
}

std::optional<Coefficient> parse_coefficient(const std::string& name) {
  if (name == "jaccard") return Coefficient::Jaccard;
  if (name == "overlap") return Coefficient::Overlap;
  if (name == "cosine") return Coefficient::Cosine;
  if (name == "dice") return Coefficient::Dice;
  return std::nullopt;
}

Rational reduced(std::uint64_t num, std::uint64_t den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  if (num == 0) return {0, 1};
  std::uint64_t g = std::gcd(num, den);
  return {num / g, den / g};
}

Threshold Threshold::parse(const std::string& text) {
  std::size_t dot = std::string::npos;
  std::size_t digits = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (c == '.') {
      if (dot != std::string::npos)
        throw ParseError("invalid threshold '" + text + "'");
      dot = i;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      ++digits;
    } else {
      throw ParseError("invalid threshold '" + text + "'");
    }
  }
  if (digits == 0 || digits > 18)
    throw ParseError("invalid threshold '" + text + "'");

  std::uint64_t num = 0;
  std::uint64_t den = 1;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '.') continue;
    num = num * 10 + static_cast<std::uint64_t>(text[i] - '0');
    if (dot != std::string::npos && i > dot) den *= 10;
  }
  if (num == 0) throw ParseError("threshold must be positive: '" + text + "'");

  Rational r = reduced(num, den);
  return Threshold{r.num, r.den, text};
}

Threshold Threshold::from_ratio(std::uint64_t num, std::uint64_t den) {
  Rational r = reduced(num, den);
  Threshold t{r.num, r.den, {}};
  t.text = std::to_string(num) + "/" + std::to_string(den);
  return t;
}

bool Threshold::valid_for(Coefficient c) const {
  if (num == 0) return false;
  if (c == Coefficient::Overlap) return is_integer() && num / den >= 1;
  return num <= den;  // 0 < t <= 1
}

void Threshold::require_valid_for(Coefficient c) const {
  if (!valid_for(c))
    throw ParseError(std::string("threshold ") + text + " invalid for " +
                     coefficient_name(c));
}

LengthBounds length_bounds(Coefficient coeff, std::uint64_t r_size,
                           const Threshold& t) {
  t.require_valid_for(coeff);
  const u128 r = r_size;
  const u128 n = t.num;
  const u128 d = t.den;
  switch (coeff) {
    case Coefficient::Jaccard:
      return {ceil_div(r * n, d), floor_div(r * d, n)};
    case Coefficient::Overlap:
      return {t.num / t.den, std::nullopt};
    case Coefficient::Cosine:
      return {ceil_div(r * n * n, d * d), floor_div(r * d * d, n * n)};
    case Coefficient::Dice:
      // lb = ceil(t*|r| / (2-t)), ub = floor((2-t)*|r| / t)
      return {ceil_div(r * n, 2 * d - n), floor_div(r * (2 * d - n), n)};
  }
  throw std::logic_error("unreachable coefficient");
}

bool meets_threshold(Coefficient coeff, std::uint64_t r_size,
                     std::uint64_t s_size, std::uint64_t intersection,
                     const Threshold& t) {
  const u128 f = intersection;
  const u128 n = t.num;
  const u128 d = t.den;
  const u128 rs_sum = static_cast<u128>(r_size) + s_size;
  switch (coeff) {
    case Coefficient::Jaccard:
      // f/(|r|+|s|-f) >= n/d  <=>  f*(d+n) >= n*(|r|+|s|)
      return f * (d + n) >= n * rs_sum;
    case Coefficient::Overlap:
      return f * d >= n;
    case Coefficient::Cosine:
      // f/sqrt(|r|*|s|) >= n/d  <=>  f^2*d^2 >= n^2*|r|*|s|
      return f * f * d * d >= n * n * static_cast<u128>(r_size) * s_size;
    case Coefficient::Dice:
      return 2 * f * d >= n * rs_sum;
  }
  throw std::logic_error("unreachable coefficient");
}

Score similarity(Coefficient coeff, std::uint64_t r_size, std::uint64_t s_size,
                 std::uint64_t intersection) {
  return Score{coeff, r_size, s_size, intersection};
}

Rational Score::exact_rational() const {
  switch (kind) {
    case Coefficient::Jaccard:
      return reduced(intersection, r_size + s_size - intersection);
    case Coefficient::Overlap:
      return {intersection, 1};
    case Coefficient::Dice:
      return reduced(2 * intersection, r_size + s_size);
    case Coefficient::Cosine: {
      std::uint64_t root =
          isqrt_ratio(static_cast<u128>(r_size) * s_size, 1, r_size + s_size);
      if (static_cast<u128>(root) * root !=
          static_cast<u128>(r_size) * s_size)
        throw std::domain_error("cosine score is irrational");
      return reduced(intersection, root);
    }
  }
  throw std::logic_error("unreachable coefficient");
}

std::string format_decimal(std::uint64_t num, std::uint64_t den,
                           unsigned places) {
  u128 scale = 1;
  for (unsigned i = 0; i < places; ++i) scale *= 10;
  const u128 scaled = static_cast<u128>(num) * scale;
  std::uint64_t q = static_cast<std::uint64_t>(scaled / den);
  const std::uint64_t rem = static_cast<std::uint64_t>(scaled % den);
  if (2 * static_cast<u128>(rem) > den ||
      (2 * static_cast<u128>(rem) == den && (q % 2) == 1)) {
    ++q;
  }
  std::uint64_t whole = q / static_cast<std::uint64_t>(scale);
  std::uint64_t frac = q % static_cast<std::uint64_t>(scale);
  std::string f = std::to_string(frac);
  f.insert(0, places - f.size(), '0');
  return std::to_string(whole) + "." + f;
}

std::string Score::decimal6() const {
  if (kind != Coefficient::Cosine) {
    Rational r = exact_rational();
    return format_decimal(r.num, r.den, 6);
  }
  // v = f*1e6/sqrt(|r|*|s|); find m = floor(v), then resolve the half-way
  // comparison 4*N <=> (2m+1)^2*D with N = f^2*1e12, D = |r|*|s|.
  const u128 kScale = static_cast<u128>(1000000);
  const u128 big_n = static_cast<u128>(intersection) * intersection * kScale * kScale;
  const u128 big_d = static_cast<u128>(r_size) * s_size;
  std::uint64_t m = isqrt_ratio(big_n, big_d, 2000000);
  const u128 lhs = 4 * big_n;
  const u128 rhs = static_cast<u128>(2 * m + 1) * (2 * m + 1) * big_d;
  if (lhs > rhs || (lhs == rhs && (m % 2) == 1)) ++m;
  return format_decimal(m, 1000000, 6);
}

}  // namespace ssjoin
