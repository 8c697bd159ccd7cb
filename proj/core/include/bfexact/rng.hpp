#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace bfexact {

using Sample = std::vector<double>;

/// Reproducible random stream keyed by (seed, stream_id).
///
/// The same key always produces the same draw sequence, on every platform:
/// the engine is std::mt19937_64 (whose output is fully specified by the
/// standard) and all variate transforms are implemented here rather than
/// delegated to the unspecified std::*_distribution classes. Distinct
/// stream_ids give streams that behave independently; the intended use is
/// stream_id = replication index, so parallel and serial sweeps draw
/// identical numbers.
class RngStream {
  public:
    RngStream(std::uint64_t seed, std::uint64_t stream_id);

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t stream_id() const noexcept { return stream_id_; }

    std::uint64_t next_u64();

    /// Uniform on [0,1) with 53 random bits.
    double uniform01();

    /// Standard normal via Box-Muller (pairs generated, second draw cached).
    double normal01();

    double normal(double mu, double sigma);

    /// One chi-square(1) variate, i.e. a squared standard normal.
    double chi2_1() {
        double z = normal01();
        return z * z;
    }

    /// k distinct indices drawn without replacement from {0,...,pool-1},
    /// in draw order (partial Fisher-Yates).
    std::vector<std::size_t> sample_indices(std::size_t pool, std::size_t k);

  private:
    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::mt19937_64 engine_;
    double cached_normal_ = 0.0;
    bool has_cached_normal_ = false;
};

/// `count` iid draws from N(mu, sigma2). sigma2 = 0 is allowed and yields a
/// constant sample. Throws std::domain_error for sigma2 < 0.
Sample sample_normal(RngStream& rng, double mu, double sigma2, std::size_t count);

}  // namespace bfexact
