// Copyright 2026 The qswap Authors
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

#pragma once

// Z-basis shot sampling. Outcome strings put qubit 0 leftmost, so "0110"
// means q1 and q2 read 1.

#include "qswap/qcore.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace qswap {

class SamplingError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Counter-based generator: draw k of stream s under seed is a pure function
/// of (seed, s, k), so replays match across platforms and thread schedules.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream)
      : key_(mix(mix(seed) ^ (stream * 0xD1B54A32D192ED03ULL))) {}

  std::uint64_t bits(std::uint64_t counter) const {
    return mix(key_ ^ mix(counter + 0x9E3779B97F4A7C15ULL));
  }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform(std::uint64_t counter) const {
    return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t key_;
};

inline std::string outcome_string(std::uint64_t index, int width) {
  std::string s(width, '0');
  for (int q = 0; q < width; ++q) {
    if ((index >> (width - 1 - q)) & 1) s[q] = '1';
  }
  return s;
}

class CountsTable {
 public:
  explicit CountsTable(int width = 1) : width_(width) {
    if (width < 1 || width > kMaxQubits) {
      throw SamplingError("counts table width out of range");
    }
  }

  int width() const { return width_; }
  long long shots() const { return shots_; }
  const std::map<std::string, long long>& counts() const { return counts_; }

  void add(const std::string& outcome, long long n = 1) {
    if (static_cast<int>(outcome.size()) != width_ ||
        outcome.find_first_not_of("01") != std::string::npos) {
      throw SamplingError("outcome '" + outcome + "' is not a " +
                          std::to_string(width_) + "-bit string");
    }
    if (n < 0) throw SamplingError("negative count");
    if (n == 0) return;
    counts_[outcome] += n;
    shots_ += n;
  }

  long long count(const std::string& outcome) const {
    auto it = counts_.find(outcome);
    return it == counts_.end() ? 0 : it->second;
  }

  double frequency(const std::string& outcome) const {
    if (shots_ == 0) throw SamplingError("empty counts table");
    return static_cast<double>(count(outcome)) / static_cast<double>(shots_);
  }

  /// Frequency of reading 1 on `qubit`.
  double excited_frequency(int qubit) const {
    if (shots_ == 0) throw SamplingError("empty counts table");
    if (qubit < 0 || qubit >= width_) throw SamplingError("bad qubit index");
    long long ones = 0;
    for (const auto& [k, n] : counts_) {
      if (k[qubit] == '1') ones += n;
    }
    return static_cast<double>(ones) / static_cast<double>(shots_);
  }

  CountsTable marginal(const std::vector<int>& qubits) const {
    CountsTable m(static_cast<int>(qubits.size()));
    for (int q : qubits) {
      if (q < 0 || q >= width_) throw SamplingError("bad qubit index");
    }
    for (const auto& [k, n] : counts_) {
      std::string key;
      for (int q : qubits) key += k[q];
      m.add(key, n);
    }
    return m;
  }

  /// Frequencies in basis-index order.
  std::vector<double> distribution() const {
    if (shots_ == 0) throw SamplingError("empty counts table");
    std::vector<double> p(std::size_t{1} << width_, 0.0);
    for (const auto& [k, n] : counts_) {
      p[std::stoull(k, nullptr, 2)] =
          static_cast<double>(n) / static_cast<double>(shots_);
    }
    return p;
  }

  bool operator==(const CountsTable&) const = default;

 private:
  int width_;
  long long shots_ = 0;
  std::map<std::string, long long> counts_;
};

inline nlohmann::json to_json(const CountsTable& t) {
  return nlohmann::json(t.counts());
}

inline CountsTable counts_from_json(const nlohmann::json& j) {
  if (!j.is_object() || j.empty()) {
    throw SamplingError("counts JSON must be a non-empty object");
  }
  CountsTable t(static_cast<int>(j.begin().key().size()));
  for (const auto& [k, v] : j.items()) t.add(k, v.get<long long>());
  return t;
}

/// Z-basis outcome probabilities of rho, negative round-off clipped.
inline std::vector<double> z_probabilities(const DensityOperator& rho) {
  const RVector d = rho.diagonal();
  std::vector<double> p(d.size());
  double total = 0.0;
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    p[i] = std::max(d(i), 0.0);
    total += p[i];
  }
  for (double& v : p) v /= total;
  return p;
}

/// `shots` categorical draws from `probs`; the multinomial sample.
inline CountsTable sample_counts(const std::vector<double>& probs, int width,
                                 long long shots, std::uint64_t seed,
                                 std::uint64_t stream = 0) {
  if (shots <= 0) throw SamplingError("shots must be positive");
  if (probs.size() != (std::size_t{1} << width)) {
    throw SamplingError("probability vector does not match width");
  }
  std::vector<double> cdf(probs.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (!(probs[i] >= 0.0)) throw SamplingError("negative probability");
    acc += probs[i];
    cdf[i] = acc;
  }
  if (!(acc > 0.0)) throw SamplingError("probabilities sum to zero");
  std::vector<long long> hist(probs.size(), 0);
  const CounterRng rng(seed, stream);
  for (long long s = 0; s < shots; ++s) {
    const double u = rng.uniform(static_cast<std::uint64_t>(s)) * acc;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    std::size_t k = static_cast<std::size_t>(it - cdf.begin());
    // Never land on a zero-probability tail outcome.
    while (k >= probs.size() || probs[k] == 0.0) --k;
    ++hist[k];
  }
  CountsTable t(width);
  for (std::size_t i = 0; i < hist.size(); ++i) {
    t.add(outcome_string(i, width), hist[i]);
  }
  return t;
}

inline CountsTable sample_counts(const DensityOperator& rho, long long shots,
                                 std::uint64_t seed,
                                 std::uint64_t stream = 0) {
  return sample_counts(z_probabilities(rho), rho.qubits(), shots, seed,
                       stream);
}

}  // namespace qswap
