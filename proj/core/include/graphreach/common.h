// Copyright 2026 The GraphReach Authors.
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

#ifndef GRAPHREACH_COMMON_H_
#define GRAPHREACH_COMMON_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace graphreach {

using NodeId = std::uint32_t;

// Error hierarchy. The CLI maps each kind onto a distinct exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid configuration or precondition violation.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Malformed or inconsistent input data.
class DataError : public Error {
 public:
  using Error::Error;
};

// Shape mismatches, non-finite values, divergence.
class NumericError : public Error {
 public:
  using Error::Error;
};

// SplitMix64 finalizer.
std::uint64_t Mix64(std::uint64_t x);

// 64-bit FNV-1a over raw bytes, chainable through `seed`.
std::uint64_t Fnv1a(std::string_view bytes,
                    std::uint64_t seed = 0xcbf29ce484222325ULL);

// Derives an independent stream seed from a root seed, a purpose label
// ("walks", "anchors", "init", ...) and an index within that purpose.
std::uint64_t DeriveSeed(std::uint64_t root, std::string_view label,
                         std::uint64_t index = 0);

// Runs body(i) for i in [0, count) across up to `threads` workers.
// threads == 0 picks the hardware concurrency. Work is statically chunked,
// so callers that seed per index get results independent of the thread count.
void ParallelFor(std::size_t count, std::size_t threads,
                 const std::function<void(std::size_t)>& body);

std::string HexDigest(std::uint64_t value);

// Keeps large freed blocks in the heap for reuse. Training frees and
// reallocates the same tensor sizes every epoch. No-op outside glibc.
void RetainFreedMemory();

}  // namespace graphreach

#endif  // GRAPHREACH_COMMON_H_
