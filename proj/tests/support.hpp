// Copyright 2026 The UED Toolkit Authors.
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

#ifndef UED_TESTS_SUPPORT_HPP_
#define UED_TESTS_SUPPORT_HPP_

// Seeded generators shared by the test suites.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ued/stats/anova.hpp"

namespace ued::testing {

inline std::string fixture(const std::string& rel) { return std::string(UED_FIXTURE_DIR) + "/" + rel; }

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("ued_test_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  double normal(double mu, double sd) { return std::normal_distribution<double>(mu, sd)(rng_); }
  std::int64_t integer(std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng_);
  }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }

  // Multiple of 1/denom in [-1, 1]; sums of these stay exact in double.
  double dyadic(int denom) {
    return static_cast<double>(integer(-denom, denom)) / static_cast<double>(denom);
  }

  std::vector<double> normals(std::size_t n, double mu, double sd) {
    std::vector<double> v(n);
    for (auto& x : v) x = normal(mu, sd);
    return v;
  }

  // A group sample with random size, location and spread.
  stats::GroupSample group(const std::string& label, std::size_t min_n = 3,
                           std::size_t max_n = 40) {
    const auto n = static_cast<std::size_t>(integer(static_cast<std::int64_t>(min_n),
                                                    static_cast<std::int64_t>(max_n)));
    return {label, normals(n, uniform(-2.0, 2.0), uniform(0.1, 3.0))};
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace ued::testing

#endif  // UED_TESTS_SUPPORT_HPP_
