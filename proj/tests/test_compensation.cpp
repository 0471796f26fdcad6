#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "lrmimo/asymptotics.hpp"
#include "lrmimo/compensation.hpp"

using namespace lrmimo;

namespace {

double rate_at(int antennas, int users, double power, int bits) {
  return prop1_rate(SystemConfig::symmetric(antennas, users, power, bits),
                    QuantizerModel::for_bits(bits))
      .average;
}

}  // namespace

TEST_CASE("an ideal low-resolution system needs no extra antennas") {
  CompensationQuery query{100, 50, 1.0, kInfiniteBits, 6400};
  const auto m = min_antennas(query);
  REQUIRE(m.has_value());
  CHECK(*m == 100);
}

TEST_CASE("solution is minimal") {
  for (const auto& [bits, snr] : {std::pair{1, -15.0}, {2, -15.0}, {2, 0.0}, {3, -5.0}}) {
    CompensationQuery query{100, 50, db_to_linear(snr), bits, 6400};
    const auto m = min_antennas(query);
    REQUIRE(m.has_value());
    const double target = rate_at(100, 50, query.power, kInfiniteBits);
    CHECK(rate_at(*m, 50, query.power, bits) >= target);
    if (*m > 50) CHECK(rate_at(*m - 1, 50, query.power, bits) < target);
  }
}

TEST_CASE("bisection agrees with an exhaustive scan") {
  std::mt19937 gen(99);
  std::uniform_int_distribution<int> users_dist(4, 16);
  std::uniform_real_distribution<double> snr_dist(-18.0, -2.0);
  std::uniform_int_distribution<int> bits_dist(1, 3);
  for (int rep = 0; rep < 10; ++rep) {
    const int users = users_dist(gen);
    const int conv = users * 2;
    const double power = db_to_linear(snr_dist(gen));
    const int bits = bits_dist(gen);
    const int m_max = conv * 8;
    CompensationQuery query{conv, users, power, bits, m_max};
    const auto fast = min_antennas(query);

    const double target = rate_at(conv, users, power, kInfiniteBits);
    std::optional<int> slow;
    for (int m = users; m <= m_max; ++m)
      if (rate_at(m, users, power, bits) >= target) {
        slow = m;
        break;
      }
    CHECK(fast == slow);
  }
}

TEST_CASE("reference operating point") {
  // frozen from an independent implementation of the same closed forms
  CompensationQuery q1{100, 50, db_to_linear(-15.0), 1, 6400};
  CompensationQuery q2{100, 50, db_to_linear(-15.0), 2, 6400};
  CompensationQuery q3{100, 50, db_to_linear(-15.0), 3, 6400};
  CHECK(*min_antennas(q1) == 279);
  CHECK(*min_antennas(q2) == 135);
  CHECK(*min_antennas(q3) == 109);
}

TEST_CASE("compensation becomes unattainable at high SNR") {
  CompensationQuery query{100, 50, db_to_linear(20.0), 1, 6400};
  const auto m = min_antennas(query);
  CHECK((!m.has_value() || *m > 500));
}

TEST_CASE("eta sweep shape and trends") {
  const std::vector<int> bits{1, 2};
  const std::vector<double> snr{-20.0, -15.0, -10.0, -5.0};
  const auto rows = eta_sweep(100, 50, bits, snr, 6400);
  REQUIRE(rows.size() == 8);

  // ordering: snr-major, bits in list order
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].snr_db == snr[i / 2]);
    CHECK(rows[i].bits == bits[i % 2]);
    CHECK(rows[i].conv_antennas == 100);
    CHECK(rows[i].users == 50);
  }

  // eta nondecreasing in SNR per bit depth; fewer bits cost more antennas
  for (std::size_t i = 0; i + 2 < rows.size(); i += 2) {
    CHECK(rows[i + 2].eta >= rows[i].eta);
    CHECK(rows[i + 3].eta >= rows[i + 1].eta);
  }
  for (std::size_t i = 0; i < rows.size(); i += 2)
    CHECK(rows[i + 1].eta <= rows[i].eta);
  for (const auto& row : rows) {
    CHECK(row.attainable);
    CHECK(row.eta == doctest::Approx(double(*row.low_antennas) / 100.0));
  }
}

TEST_CASE("queries are validated") {
  CHECK_THROWS_AS(min_antennas(CompensationQuery{40, 50, 1.0, 1, 6400}),
                  std::invalid_argument);
  CHECK_THROWS_AS(min_antennas(CompensationQuery{100, 50, 1.0, 1, 50}),
                  std::invalid_argument);
  CHECK_THROWS_AS(min_antennas(CompensationQuery{100, 50, 0.0, 1, 6400}),
                  std::invalid_argument);
  CHECK_THROWS_AS(eta_sweep(100, 50, {99}, {0.0}, 6400), std::invalid_argument);
}
