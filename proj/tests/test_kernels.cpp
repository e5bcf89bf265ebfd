#include <algorithm>
#include <random>
#include <set>
#include <vector>

#include <doctest.h>

#include "ssjoin/kernels.hpp"
#include "support/checks.hpp"

using namespace ssjoin;

namespace {

std::vector<std::uint32_t> random_sorted(std::mt19937_64& rng,
                                         std::size_t max_len,
                                         std::uint32_t max_value) {
  std::uniform_int_distribution<std::size_t> len_dist(0, max_len);
  std::uniform_int_distribution<std::uint32_t> val_dist(0, max_value);
  std::set<std::uint32_t> values;
  const std::size_t len = len_dist(rng);
  while (values.size() < len && values.size() <= max_value)
    values.insert(val_dist(rng));
  return {values.begin(), values.end()};
}

}  // namespace

TEST_CASE("scalar intersection on fixed cases") {
  const std::vector<std::uint32_t> a{1, 3, 5, 7};
  const std::vector<std::uint32_t> b{2, 3, 4, 7, 9};
  CHECK(kernels::intersect_size_scalar(a.data(), a.size(), b.data(),
                                       b.size()) == 2);
  CHECK(kernels::intersect_size_scalar(a.data(), a.size(), nullptr, 0) == 0);
  CHECK(kernels::intersect_size_scalar(a.data(), a.size(), a.data(),
                                       a.size()) == 4);
}

TEST_CASE("every variant matches std::set_intersection") {
  std::mt19937_64 rng(42);
  const auto variants = kernels::available_variants();
  REQUIRE(!variants.empty());
  for (int iter = 0; iter < 3000; ++iter) {
    const auto a = random_sorted(rng, 200, 300);
    const auto b = random_sorted(rng, 200, 300);
    const auto expected = testsupport::intersection_oracle(a, b);
    for (const auto& [name, fn] : variants) {
      INFO("variant ", name);
      CHECK(fn(a.data(), a.size(), b.data(), b.size()) == expected);
    }
  }
}

TEST_CASE("variants agree on long runs and adversarial shapes") {
  const auto variants = kernels::available_variants();
  std::vector<std::uint32_t> a, b;
  for (std::uint32_t i = 0; i < 1000; ++i) a.push_back(2 * i);
  for (std::uint32_t i = 0; i < 1000; ++i) b.push_back(3 * i);
  const auto expected = testsupport::intersection_oracle(a, b);
  for (const auto& [name, fn] : variants) {
    INFO("variant ", name);
    CHECK(fn(a.data(), a.size(), b.data(), b.size()) == expected);
  }
}

TEST_CASE("dispatch picks a live variant") {
  const std::vector<std::uint32_t> a{1, 2, 3, 4, 5, 6, 7, 8, 9};
  CHECK(kernels::intersect_size(a, a) == a.size());
  CHECK(kernels::active_variant() != nullptr);
}
