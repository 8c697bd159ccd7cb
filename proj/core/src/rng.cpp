#include "bfexact/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace bfexact {
namespace {

// splitmix64; used only to spread (seed, stream_id) into an engine key.
std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id),
      engine_(mix64(mix64(seed) ^ mix64(stream_id + 0x6a09e667f3bcc909ULL))) {}

std::uint64_t RngStream::next_u64() { return engine_(); }

double RngStream::uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::normal01() {
    if (has_cached_normal_) {
        has_cached_normal_ = false;
        return cached_normal_;
    }
    // u1 must stay away from 0 for the log.
    double u1;
    do {
        u1 = uniform01();
    } while (u1 <= 0.0);
    double u2 = uniform01();
    double r = std::sqrt(-2.0 * std::log(u1));
    double theta = 2.0 * std::numbers::pi * u2;
    cached_normal_ = r * std::sin(theta);
    has_cached_normal_ = true;
    return r * std::cos(theta);
}

double RngStream::normal(double mu, double sigma) { return mu + sigma * normal01(); }

std::vector<std::size_t> RngStream::sample_indices(std::size_t pool, std::size_t k) {
    if (k > pool) throw std::domain_error("sample_indices: k exceeds pool size");
    std::vector<std::size_t> idx(pool);
    for (std::size_t i = 0; i < pool; ++i) idx[i] = i;
    for (std::size_t i = 0; i < k; ++i) {
        // uniform j in [i, pool)
        std::size_t j = i + static_cast<std::size_t>(uniform01() * static_cast<double>(pool - i));
        if (j >= pool) j = pool - 1;
        std::swap(idx[i], idx[j]);
    }
    idx.resize(k);
    return idx;
}

Sample sample_normal(RngStream& rng, double mu, double sigma2, std::size_t count) {
    if (sigma2 < 0.0) throw std::domain_error("sample_normal: negative variance");
    Sample out(count);
    double sigma = std::sqrt(sigma2);
    for (auto& v : out) v = rng.normal(mu, sigma);
    return out;
}

}  // namespace bfexact
