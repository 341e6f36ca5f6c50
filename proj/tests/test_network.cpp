// Copyright 2026 The catsize Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "catsize/network.hpp"

namespace {

using catsize::Complex;

TEST(SplittingAngles, LastIsQuarterTurnAndSinesTelescope) {
  for (int m = 2; m <= 6; ++m) {
    const auto t = catsize::splitting_angles(m);
    ASSERT_EQ(static_cast<int>(t.size()), m - 1);
    EXPECT_NEAR(t.back(), std::numbers::pi / 4.0, 1e-15);
    // Mode q receives sqrt(M) a prod_{i<q} sin(theta_i) cos(theta_q) = a.
    double carried = std::sqrt(static_cast<double>(m));
    for (int q = 0; q < m - 1; ++q) {
      EXPECT_NEAR(carried * std::cos(t[q]), 1.0, 1e-13) << m << " " << q;
      carried *= std::sin(t[q]);
    }
    EXPECT_NEAR(carried, 1.0, 1e-13);
  }
}

TEST(SplittingAngles, RejectsSingleMode) {
  EXPECT_THROW(catsize::splitting_angles(1), catsize::InvalidArgument);
}

TEST(CompositeSplitter, MapsCoherentPairs) {
  const int c = 30;
  const Complex a(0.7, 0.2), b(-0.4, 0.5);
  const double th = 0.6;
  const auto in = catsize::tensor({catsize::coherent_vector(a, c, 1e-14).normalized(),
                                   catsize::coherent_vector(b, c, 1e-14).normalized()});
  const int targets[2] = {0, 1};
  const auto out = catsize::apply_local(catsize::composite_beamsplitter_local(th, c),
                                        std::span<const int>(targets, 2), in);
  const auto expect = catsize::tensor(
      {catsize::coherent_vector(a * std::cos(th) + b * std::sin(th), c, 1e-14).normalized(),
       catsize::coherent_vector(a * std::sin(th) - b * std::cos(th), c, 1e-14).normalized()});
  EXPECT_NEAR(std::abs(out.inner(expect)), 1.0, 1e-12);
}

class NetworkFidelity : public ::testing::TestWithParam<std::tuple<int, double>> {};

TEST_P(NetworkFidelity, SplitsCoherentModeEvenly) {
  const auto [m, a] = GetParam();
  const auto r = catsize::check_splitting_network(m, a);
  EXPECT_GE(r.fidelity, 1.0 - 1e-8) << r.cutoff;
  EXPECT_LT(r.norm_deviation, 1e-10);
}

INSTANTIATE_TEST_SUITE_P(ModesAndAmplitudes, NetworkFidelity,
                         ::testing::Combine(::testing::Values(2, 3, 4),
                                            ::testing::Values(0.5, 1.0, 1.5)));

TEST(NetworkFidelity, ComplexAmplitude) {
  const auto r = catsize::check_splitting_network(3, std::polar(1.2, 0.9));
  EXPECT_GE(r.fidelity, 1.0 - 1e-8);
}

TEST(CatSplitting, SingleModeCatBecomesEntangledCoherentState) {
  const auto r = catsize::check_cat_splitting(3, 0.8);
  EXPECT_GE(r.fidelity, 1.0 - 1e-8);
  for (int n : {2, 4}) EXPECT_GE(catsize::check_cat_splitting(n, 0.6).fidelity, 1.0 - 1e-8) << n;
}

TEST(CatSplitting, WrongAnglesAreDetected) {
  // Splitting sqrt(M) a over M modes with M = 3 angles but the amplitude for M = 2.
  const int c = 25;
  const Complex a = 1.0;
  const auto input = catsize::coherent_vector(std::sqrt(2.0) * a, c, 1e-14).normalized();
  const auto vac = catsize::number_state(0, c);
  const auto out = catsize::apply_splitting_network(catsize::tensor({input, vac, vac}));
  const auto single = catsize::coherent_vector(a, c, 1e-14).normalized();
  const auto target = catsize::tensor({single, single, single});
  EXPECT_LT(std::norm(out.inner(target)), 0.99);
}

}  // namespace
