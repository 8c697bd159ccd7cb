#include "bfexact/transform.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>
#include <utility>

namespace bfexact {
namespace {

Eigen::MatrixXd build_helmert(Eigen::Index n) {
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
    double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));
    h.row(0).setConstant(inv_sqrt_n);
    // Row k (k = 2..n) contrasts the first n-k+2 entries: n-k+1 equal
    // entries followed by -(n-k+1) times the same scale, then zeros.
    for (Eigen::Index k = 2; k <= n; ++k) {
        Eigen::Index ones = n - k + 1;
        double scale = 1.0 / std::sqrt(static_cast<double>(ones) * static_cast<double>(ones + 1));
        for (Eigen::Index j = 0; j < ones; ++j) h(k - 1, j) = scale;
        h(k - 1, ones) = -static_cast<double>(ones) * scale;
    }
    return h;
}

// Sweeps reuse identical shapes, so full bases are cached by dimension.
const OrthoBasis& cached_helmert(Eigen::Index n) {
    static std::map<Eigen::Index, std::unique_ptr<OrthoBasis>> cache;
    static std::shared_mutex m;
    {
        std::shared_lock lock(m);
        auto it = cache.find(n);
        if (it != cache.end()) return *it->second;
    }
    std::unique_lock lock(m);
    auto it = cache.find(n);
    if (it == cache.end()) {
        auto basis = std::make_unique<OrthoBasis>(OrthoBasis{build_helmert(n)});
        it = cache.emplace(n, std::move(basis)).first;
    }
    return *it->second;
}

const OrthoBasis& cached_partial(Eigen::Index n, Eigen::Index m) {
    static std::map<std::pair<Eigen::Index, Eigen::Index>, std::unique_ptr<OrthoBasis>> cache;
    static std::shared_mutex mu;
    auto key = std::make_pair(n, m);
    {
        std::shared_lock lock(mu);
        auto it = cache.find(key);
        if (it != cache.end()) return *it->second;
    }
    std::unique_lock lock(mu);
    auto it = cache.find(key);
    if (it == cache.end()) {
        auto basis = std::make_unique<OrthoBasis>(OrthoBasis{cached_helmert(m).rows.topRows(n)});
        it = cache.emplace(key, std::move(basis)).first;
    }
    return *it->second;
}

}  // namespace

const OrthoBasis& helmert_basis(Eigen::Index n) {
    if (n < 1) throw std::domain_error("helmert_basis: n must be >= 1");
    return cached_helmert(n);
}

const OrthoBasis& partial_basis(Eigen::Index n, Eigen::Index m) {
    if (n < 1) throw std::domain_error("partial_basis: n must be >= 1");
    if (n > m) throw std::domain_error("partial_basis: n must not exceed m");
    return cached_partial(n, m);
}

ProjectedVector project(const Sample& x, const Sample& y) {
    auto m = static_cast<Eigen::Index>(x.size());
    auto n = static_cast<Eigen::Index>(y.size());
    if (n < 2) throw std::domain_error("project: need at least 2 observations per sample");
    if (m < n)
        throw std::domain_error("project: first sample must be the larger one; swap the samples");

    Eigen::Map<const Eigen::VectorXd> xv(x.data(), m);
    Eigen::Map<const Eigen::VectorXd> yv(y.data(), n);

    ProjectedVector out;
    out.z = partial_basis(n, m).rows * xv / std::sqrt(static_cast<double>(m)) -
            helmert_basis(n).rows * yv / std::sqrt(static_cast<double>(n));
    out.z1 = out.z(0);
    out.ss_rest = out.z.tail(n - 1).squaredNorm();
    return out;
}

Eigen::MatrixXd project_columns(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
    Eigen::Index m = x.rows();
    Eigen::Index n = y.rows();
    if (n < 2) throw std::domain_error("project_columns: need at least 2 rows per sample");
    if (m < n)
        throw std::domain_error("project_columns: first sample must be the larger one; swap the samples");
    return partial_basis(n, m).rows * x / std::sqrt(static_cast<double>(m)) -
           helmert_basis(n).rows * y / std::sqrt(static_cast<double>(n));
}

}  // namespace bfexact
