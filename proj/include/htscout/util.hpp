/*
 * SPDX-FileCopyrightText: Copyright 2026 The htscout Authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef HTSCOUT_UTIL_HPP
#define HTSCOUT_UTIL_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace htscout {

/// SplitMix64 finalizer; the building block of all counter-based seeding.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t fnv1a64(std::string_view text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : text) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

/// Seed for a named stage derived from the master seed.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::string_view label) {
    return splitmix64(master ^ splitmix64(fnv1a64(label)));
}

/// Seed for the i-th item of a stream (vector block, IC instance, ...).
constexpr std::uint64_t counter_seed(std::uint64_t stream, std::uint64_t index) {
    return splitmix64(stream + splitmix64(index + 0x632be59bd9b4e019ULL));
}

/// Runs fn(i) for i in [0, n) on up to `jobs` threads. Each index is visited
/// exactly once; callers write results into index-addressed slots so the
/// outcome does not depend on the worker count.
void parallel_for(std::size_t n, unsigned jobs,
                  const std::function<void(std::size_t)> &fn);

/// Shortest round-trip decimal representation of a double.
std::string format_double(double value);

/// Lower-case hex of a 64-bit value, zero padded.
std::string to_hex(std::uint64_t value);

/// Splits one CSV record on commas. Quoting is not supported; none of the
/// artifacts written by this tool need it.
std::vector<std::string> split_csv(std::string_view line);

std::string trim(std::string_view text);

std::string read_file(const std::string &path);
void write_file(const std::string &path, std::string_view contents);

} // namespace htscout

#endif // HTSCOUT_UTIL_HPP
