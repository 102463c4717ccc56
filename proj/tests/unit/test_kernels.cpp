#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <bit>
#include <cstdint>
#include <random>
#include <vector>

#include "jflow/simd/kernels.hpp"

using namespace jflow::simd;

namespace {

std::vector<double> noise(std::mt19937_64& rng, std::size_t len, double scale) {
  std::normal_distribution<double> d(0.0, scale);
  std::vector<double> v(len);
  for (auto& x : v) x = d(rng);
  return v;
}

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::bit_cast<std::uint64_t>(a[i]) != std::bit_cast<std::uint64_t>(b[i])) return false;
  }
  return true;
}

bool same_bits(double a, double b) {
  return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b);
}

const std::size_t kLengths[] = {0, 1, 3, 4, 5, 7, 8, 17, 64, 1023, 4099};

}  // namespace

TEST_CASE("scalar table is always available and listed first") {
  const auto isas = available_isas();
  REQUIRE_FALSE(isas.empty());
  CHECK(isas.front() == Isa::Scalar);
  CHECK(table(Isa::Scalar).isa == Isa::Scalar);
}

TEST_CASE("every available variant is bit-identical to the scalar reference") {
  const KernelTable& ref = scalar_table();
  std::mt19937_64 rng(7);
  for (Isa isa : available_isas()) {
    const KernelTable& t = table(isa);
    CAPTURE(to_string(isa));
    for (std::size_t len : kLengths) {
      CAPTURE(len);
      const auto a = noise(rng, len, 1.0);
      const auto b = noise(rng, len, 3.0);
      const auto c = noise(rng, len, 1e-3);

      std::vector<double> r1(len), r2(len);
      ref.second_difference(a.data(), b.data(), c.data(), r1.data(), len, 17.5);
      t.second_difference(a.data(), b.data(), c.data(), r2.data(), len, 17.5);
      CHECK(same_bits(r1, r2));

      ref.first_difference(a.data(), c.data(), r1.data(), len, -0.3);
      t.first_difference(a.data(), c.data(), r2.data(), len, -0.3);
      CHECK(same_bits(r1, r2));

      ref.axpy(a.data(), 0.123, b.data(), r1.data(), len);
      t.axpy(a.data(), 0.123, b.data(), r2.data(), len);
      CHECK(same_bits(r1, r2));

      r1 = a;
      r2 = a;
      ref.accumulate(r1.data(), 1.0 / 3.0, c.data(), len);
      t.accumulate(r2.data(), 1.0 / 3.0, c.data(), len);
      CHECK(same_bits(r1, r2));

      std::vector<double> lo1(len), hi1(len), lo2(len), hi2(len);
      ref.sym2_eigenvalues(a.data(), c.data(), b.data(), lo1.data(), hi1.data(), len);
      t.sym2_eigenvalues(a.data(), c.data(), b.data(), lo2.data(), hi2.data(), len);
      CHECK(same_bits(lo1, lo2));
      CHECK(same_bits(hi1, hi2));

      CHECK(same_bits(ref.sum(b.data(), len), t.sum(b.data(), len)));
      CHECK(same_bits(ref.dot(a.data(), b.data(), len), t.dot(a.data(), b.data(), len)));

      if (len > 0) {
        double l1, h1, l2, h2;
        ref.minmax(b.data(), len, &l1, &h1);
        t.minmax(b.data(), len, &l2, &h2);
        CHECK(same_bits(l1, l2));
        CHECK(same_bits(h1, h2));
      }
    }
  }
}

TEST_CASE("sym2 eigenvalues are ascending and reproduce trace and determinant") {
  std::mt19937_64 rng(11);
  const std::size_t len = 257;
  const auto a = noise(rng, len, 2.0);
  const auto b = noise(rng, len, 2.0);
  const auto d = noise(rng, len, 2.0);
  std::vector<double> lo(len), hi(len);
  scalar_table().sym2_eigenvalues(a.data(), b.data(), d.data(), lo.data(), hi.data(), len);
  for (std::size_t i = 0; i < len; ++i) {
    CHECK(lo[i] <= hi[i]);
    CHECK(lo[i] + hi[i] == doctest::Approx(a[i] + d[i]).epsilon(1e-12));
    CHECK(lo[i] * hi[i] == doctest::Approx(a[i] * d[i] - b[i] * b[i]).epsilon(1e-10));
  }
}

TEST_CASE("compensated sum recovers cancellation") {
  std::vector<double> x = {1e16, 1.0, -1e16, 1.0, 1e-3};
  for (Isa isa : available_isas()) {
    CHECK(table(isa).sum(x.data(), x.size()) == doctest::Approx(2.001).epsilon(1e-14));
  }
}

TEST_CASE("set_active switches the table and rejects nothing that is listed") {
  const Isa before = active().isa;
  for (Isa isa : available_isas()) {
    set_active(isa);
    CHECK(active().isa == isa);
  }
  set_active(before);
}
