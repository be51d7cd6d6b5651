// SPDX-License-Identifier: Apache-2.0
//
// starbeam - wideband beamforming simulator for STAR-RIS assisted THz links
// Copyright (C) 2026 starbeam developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <atomic>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>

namespace starbeam {

using cxd = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CRow = Eigen::RowVectorXcd;
using CMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;

constexpr double kPi = 3.14159265358979323846;
constexpr double kSpeedOfLight = 2.99792458e8; // m/s

/// Invalid configuration or geometry supplied by the caller.
class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(const std::string &msg) : std::runtime_error(msg) {}
};

/// A numerical subproblem could not be solved to its required tolerance.
class SolverError : public std::runtime_error {
  public:
    explicit SolverError(const std::string &msg) : std::runtime_error(msg) {}
};

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t &state)
{
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}
} // namespace detail

/// Deterministic random stream (xoshiro256**, splitmix64-seeded).
///
/// The engine and the normal sampler are implemented explicitly so that a
/// given (seed, stream) pair produces the same draw sequence on every
/// platform. Independent sub-streams are derived with split(), which allows
/// parallel Monte-Carlo workers to stay reproducible regardless of
/// scheduling.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : seed_(seed)
    {
        std::uint64_t sm = seed;
        for (auto &word : state_)
            word = detail::splitmix64(sm);
    }

    /// Derive an independent stream; (seed, stream) fully determines it.
    Rng split(std::uint64_t stream) const
    {
        std::uint64_t sm = seed_ ^ (0x9e3779b97f4a7c15ULL + stream);
        return Rng(detail::splitmix64(sm) ^ stream);
    }

    std::uint64_t next_u64()
    {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform double in [0, 1).
    double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via Box-Muller (explicit, platform-stable).
    double normal()
    {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        double u1 = 0.0;
        do {
            u1 = uniform();
        } while (u1 <= 0.0);
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        cached_ = r * std::sin(2.0 * kPi * u2);
        have_cached_ = true;
        return r * std::cos(2.0 * kPi * u2);
    }

    /// Circularly-symmetric complex normal with unit variance per component pair.
    cxd complex_normal() { return cxd(normal(), normal()); }

    std::uint64_t seed() const { return seed_; }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::uint64_t seed_;
    std::uint64_t state_[4] = {};
    bool have_cached_ = false;
    double cached_ = 0.0;
};

/// Run fn(i) for i in [0, count) on a small thread pool. Results must be
/// written to pre-sized slots indexed by i so output order is deterministic.
inline void parallel_for(std::size_t count, const std::function<void(std::size_t)> &fn,
                         unsigned max_threads = 0)
{
    unsigned hw = max_threads ? max_threads : std::thread::hardware_concurrency();
    if (hw < 2 || count < 2) {
        for (std::size_t i = 0; i < count; ++i)
            fn(i);
        return;
    }
    hw = std::min<std::size_t>(hw, count);
    std::vector<std::thread> pool;
    pool.reserve(hw);
    std::atomic<std::size_t> next{0};
    for (unsigned t = 0; t < hw; ++t) {
        pool.emplace_back([&]() {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count)
                    return;
                fn(i);
            }
        });
    }
    for (auto &th : pool)
        th.join();
}

} // namespace starbeam
