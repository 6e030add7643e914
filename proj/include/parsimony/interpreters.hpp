#pragma once

// A consistent prior over a finite set of languages, derived from the lengths
// of the shortest pairwise simulators. Columns of 2^-L normalize to a positive
// stochastic matrix whose stationary vector is the unique fixed point: the
// weight of a language is what the others collectively spend to reach it.

#include <cmath>
#include <cstdint>
#include <vector>

#include "parsimony/errors.hpp"
#include "parsimony/info.hpp"

namespace parsimony {

// L[i][j]: bits prepended to programs of language j so language i runs them
using SimulatorLengths = std::vector<std::vector<double>>;

namespace detail {

inline void require_square(const SimulatorLengths& l) {
    if (l.empty()) throw OutOfRange("need at least one language");
    for (const std::vector<double>& row : l) {
        if (row.size() != l.size()) throw Malformed("length matrix is not square");
        for (const double v : row)
            if (!std::isfinite(v)) throw Malformed("length matrix entry is not finite");
    }
}

}  // namespace detail

// Full input contract for genuine simulator tables: self-simulation is free
// and no length is negative.
inline void validate_simulator_lengths(const SimulatorLengths& l) {
    detail::require_square(l);
    for (std::size_t i = 0; i < l.size(); ++i) {
        if (l[i][i] != 0.0) throw Malformed("self-simulator length must be zero");
        for (const double v : l[i])
            if (v < 0.0) throw Malformed("negative simulator length");
    }
}

// Column j holds 2^-L[.][j] normalized to sum 1. A common additive shift of
// the whole matrix cancels in the normalization.
inline std::vector<std::vector<double>> transition_matrix(const SimulatorLengths& l) {
    detail::require_square(l);
    const std::size_t n = l.size();
    std::vector<std::vector<double>> t(n, std::vector<double>(n));
    for (std::size_t j = 0; j < n; ++j) {
        double shortest = l[0][j];
        for (std::size_t i = 1; i < n; ++i) shortest = std::min(shortest, l[i][j]);
        double mass = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            t[i][j] = std::exp2(shortest - l[i][j]);
            mass += t[i][j];
        }
        for (std::size_t i = 0; i < n; ++i) t[i][j] /= mass;
    }
    return t;
}

// Power iteration from a given start until the fixed-point residual
// ||Tp - p||_inf drops to tol. A matrix without a unit Perron value never
// meets the residual bound and is reported as nonconvergent.
inline DiscreteDist stationary_prior_from(const std::vector<std::vector<double>>& t,
                                          std::vector<double> start, double tol = 1e-12) {
    detail::require_square(t);
    const std::size_t n = t.size();
    if (start.size() != n) throw OutOfRange("start vector length mismatch");

    std::vector<double> p = std::move(start), next(n);
    const auto apply = [&](const std::vector<double>& v, std::vector<double>& out) {
        for (std::size_t i = 0; i < n; ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j < n; ++j) acc += t[i][j] * v[j];
            out[i] = acc;
        }
    };

    constexpr int max_iterations = 200000;
    for (int it = 0; it < max_iterations; ++it) {
        apply(p, next);
        double sum = 0.0;
        for (const double v : next) sum += v;
        if (!(sum > 0.0)) throw NonConvergence("iteration mass vanished");
        for (double& v : next) v /= sum;
        std::swap(p, next);

        apply(p, next);
        double residual = 0.0;
        for (std::size_t i = 0; i < n; ++i) residual = std::max(residual, std::abs(next[i] - p[i]));
        if (residual <= tol) return DiscreteDist::from_weights(std::move(p));
    }
    throw NonConvergence("no fixed point within the iteration cap");
}

inline DiscreteDist stationary_prior(const std::vector<std::vector<double>>& t,
                                     double tol = 1e-12) {
    detail::require_square(t);
    return stationary_prior_from(
        t, std::vector<double>(t.size(), 1.0 / static_cast<double>(t.size())), tol);
}

}  // namespace parsimony
