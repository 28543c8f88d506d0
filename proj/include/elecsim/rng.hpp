#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace elecsim {

/// Derive an independent 64-bit seed from a root seed and a path of stream
/// labels (e.g. generation and individual index). Stable across runs.
inline std::uint64_t derive_seed(std::uint64_t root, std::initializer_list<std::uint64_t> path)
{
    std::vector<std::uint32_t> words;
    words.reserve(2 + 2 * path.size());
    auto push = [&words](std::uint64_t v) {
        words.push_back(static_cast<std::uint32_t>(v));
        words.push_back(static_cast<std::uint32_t>(v >> 32));
    };
    push(root);
    for (auto p : path)
        push(p);
    std::seed_seq seq(words.begin(), words.end());
    std::array<std::uint32_t, 2> out{};
    seq.generate(out.begin(), out.end());
    return (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
}

inline std::mt19937_64 make_rng(std::uint64_t root, std::initializer_list<std::uint64_t> path = {})
{
    return std::mt19937_64(derive_seed(root, path));
}

} // namespace elecsim
