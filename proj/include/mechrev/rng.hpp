// Copyright 2026 The mechrev Authors
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

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace mechrev {

/// splitmix64 finaliser.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept
{
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Stateless draw number `index` of stream `stream` under `seed`.
constexpr std::uint64_t counter_bits(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) noexcept
{
  return mix64(mix64(mix64(seed) ^ stream) ^ index);
}

/// Uniform on [0, 1) with 53 random bits.
constexpr double counter_uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) noexcept
{
  return static_cast<double>(counter_bits(seed, stream, index) >> 11) * 0x1.0p-53;
}

/// Sequential view of one stream.
class CounterRng
{
public:
  CounterRng(std::uint64_t seed, std::uint64_t stream, std::uint64_t start = 0) noexcept
    : seed_(seed)
    , stream_(stream)
    , next_(start)
  {}

  std::uint64_t bits() noexcept
  {
    return counter_bits(seed_, stream_, next_++);
  }
  double uniform() noexcept
  {
    return counter_uniform(seed_, stream_, next_++);
  }

private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t next_;
};

/// Splits [0, total) into fixed chunks, runs `f(begin, end)` on worker
/// threads and returns the chunk results in chunk order. The chunking does
/// not depend on the thread count.
template <class F>
auto parallel_chunks(std::uint64_t total, F &&f, std::uint64_t chunk = 4096)
{
  using R = decltype(f(std::uint64_t{}, std::uint64_t{}));
  std::uint64_t const chunks = total == 0 ? 0 : (total + chunk - 1) / chunk;
  std::vector<R> out(chunks);
  unsigned const hw = std::max(1U, std::thread::hardware_concurrency());
  std::size_t const workers = static_cast<std::size_t>(std::min<std::uint64_t>(hw, chunks));
  if (workers <= 1)
  {
    for (std::uint64_t k = 0; k < chunks; ++k)
    {
      out[k] = f(k * chunk, std::min(total, (k + 1) * chunk));
    }
    return out;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w)
  {
    pool.emplace_back([&, w] {
      try
      {
        for (std::uint64_t k = w; k < chunks; k += workers)
        {
          out[k] = f(k * chunk, std::min(total, (k + 1) * chunk));
        }
      }
      catch (...)
      {
        errors[w] = std::current_exception();
      }
    });
  }
  for (std::thread &t : pool)
  {
    t.join();
  }
  for (auto const &e : errors)
  {
    if (e)
    {
      std::rethrow_exception(e);
    }
  }
  return out;
}

}  // namespace mechrev
