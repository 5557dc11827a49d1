// Copyright 2026 The sphreach Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "doctest.h"
#include "sphreach/montecarlo.hpp"
#include "sphreach/rng.hpp"

using namespace sphreach;

TEST_CASE("Philox4x32-10 known-answer vectors") {
  const Philox4x32 zero(0);
  const Philox4x32::Block a = zero({0, 0, 0, 0});
  CHECK(a == Philox4x32::Block{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
  const Philox4x32 ones(~std::uint64_t{0});
  const Philox4x32::Block b = ones({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu});
  CHECK(b == Philox4x32::Block{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
}

TEST_CASE("normal stream moments") {
  const NormalStream s(42, 7);
  double m1 = 0.0, m2 = 0.0, m4 = 0.0;
  const int blocks = 100000;
  for (std::uint32_t b = 0; b < blocks; ++b) {
    for (double z : s.pair(b)) {
      m1 += z;
      m2 += z * z;
      m4 += z * z * z * z;
    }
  }
  const double n = 2.0 * blocks;
  CHECK(std::fabs(m1 / n) < 5.0 / std::sqrt(n));
  CHECK(std::fabs(m2 / n - 1.0) < 5.0 * std::sqrt(2.0 / n));
  CHECK(std::fabs(m4 / n - 3.0) < 5.0 * std::sqrt(96.0 / n));
}

TEST_CASE("streams are reproducible and distinct") {
  CHECK(NormalStream(1, 2).pair(3) == NormalStream(1, 2).pair(3));
  CHECK(NormalStream(1, 2).pair(3) != NormalStream(1, 3).pair(3));
  CHECK(NormalStream(1, 2).pair(3) != NormalStream(2, 2).pair(3));
  CHECK(tube_stream_seed(5) != 5u);

  const FieldSample a = sample_ensemble(7, 11, 4);
  const FieldSample b = sample_ensemble(7, 11, 4);
  const FieldSample c = sample_ensemble(7, 11, 5);
  CHECK(a.a == b.a);
  CHECK(a.a != c.a);
  double norm = 0.0;
  for (double x : a.a) norm += x * x;
  CHECK(norm == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(a.sample_index == 4u);
  CHECK(a.master_seed == 11u);
}
