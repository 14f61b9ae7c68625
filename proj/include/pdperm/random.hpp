#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace pdperm {

using Rng = std::mt19937_64;

/// Generator for stream (a, b, c) of `seed`. Distinct tuples give independent streams, so
/// parallel work items can draw without sharing state.
Rng make_rng(std::uint64_t seed, std::uint64_t a = 0, std::uint64_t b = 0, std::uint64_t c = 0);

/// Uniform integer in [0, bound).
std::size_t uniform_index(Rng& rng, std::size_t bound);

double standard_normal(Rng& rng);

double beta_draw(Rng& rng, double alpha, double beta);

}  // namespace pdperm
