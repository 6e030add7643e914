#pragma once

// Discrete information measures: the signed change-of-belief measure, KL,
// entropy, the length-prior minimizer over a feasible set, closed-form
// Dirichlet-multinomial quantities, and the parsimony objective report
// (omega / chi) over weighted description ensembles. All quantities in bits.

#include <cassert>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <unordered_map>
#include <vector>

#include "parsimony/errors.hpp"
#include "parsimony/special.hpp"

namespace parsimony {

class DiscreteDist {
  public:
    explicit DiscreteDist(std::vector<double> weights) : w_(std::move(weights)) {
        double sum = 0.0;
        for (const double p : w_) {
            if (!(p >= 0.0)) throw NotNormalized("negative or NaN weight");
            sum += p;
        }
        if (std::abs(sum - 1.0) > 1e-12)
            throw NotNormalized("weights sum to " + std::to_string(sum));
    }

    // normalize arbitrary nonnegative weights
    static DiscreteDist from_weights(std::vector<double> weights) {
        double sum = 0.0;
        for (const double p : weights) {
            if (!(p >= 0.0)) throw NotNormalized("negative or NaN weight");
            sum += p;
        }
        if (!(sum > 0.0)) throw NotNormalized("weights sum to zero");
        for (double& p : weights) p /= sum;
        // absorb the last ulps so the checked constructor accepts
        return DiscreteDist(std::move(weights));
    }

    std::size_t size() const { return w_.size(); }
    double operator[](std::size_t i) const { return w_[i]; }
    const std::vector<double>& weights() const { return w_; }

  private:
    std::vector<double> w_;
};

inline double entropy(const DiscreteDist& p) {
    double h = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i)
        if (p[i] > 0.0) h -= p[i] * std::log2(p[i]);
    return h;
}

// Expected log-ratio of target to base under the view R. Signed infinity when
// the view's support hits a zero in either argument (a zero in the target
// dominates); never NaN.
inline double info(const DiscreteDist& view, const DiscreteDist& target,
                   const DiscreteDist& base) {
    assert(view.size() == target.size() && view.size() == base.size());
    double sum = 0.0;
    bool neg_inf = false, pos_inf = false;
    for (std::size_t i = 0; i < view.size(); ++i) {
        if (view[i] <= 0.0) continue;
        if (target[i] <= 0.0) neg_inf = true;
        else if (base[i] <= 0.0) pos_inf = true;
        else sum += view[i] * std::log2(target[i] / base[i]);
    }
    if (neg_inf) return -std::numeric_limits<double>::infinity();
    if (pos_inf) return std::numeric_limits<double>::infinity();
    return sum;
}

inline double kl(const DiscreteDist& r, const DiscreteDist& q) { return info(r, r, q); }

struct RestrictedMinimizer {
    DiscreteDist q;
    double kl_star;  // log2(1 / prior mass of the feasible set)
};

// Cor-4-style minimizer: among distributions supported on the feasible set,
// Q* proportional to 2^-L minimizes KL against the length prior, achieving
// kl_star = -log2 sum_feasible 2^-L. `lengths` need not be a complete code.
inline RestrictedMinimizer restricted_minimizer(const std::vector<double>& lengths,
                                                const std::vector<bool>& feasible) {
    assert(lengths.size() == feasible.size());
    std::vector<double> w(lengths.size(), 0.0);
    double mass = 0.0;
    for (std::size_t i = 0; i < lengths.size(); ++i) {
        if (!feasible[i]) continue;
        w[i] = std::exp2(-lengths[i]);
        mass += w[i];
    }
    if (!(mass > 0.0)) throw EmptyFeasibleSet("no feasible object has positive prior");
    for (double& p : w) p /= mass;
    return {DiscreteDist::from_weights(std::move(w)), -std::log2(mass)};
}

// Per-label observation counts C_y, y in [ell]; ell >= 2 even when some labels
// are unobserved.
struct LabelCounts {
    std::vector<std::uint64_t> counts;

    explicit LabelCounts(std::vector<std::uint64_t> c) : counts(std::move(c)) {
        if (counts.size() < 2) throw OutOfRange("at least two labels required");
    }

    std::size_t ell() const { return counts.size(); }
    std::uint64_t total() const {
        std::uint64_t t = 0;
        for (const std::uint64_t c : counts) t += c;
        return t;
    }
};

// log2 of the marginal likelihood of the counts under a flat Dirichlet prior
inline double dirichlet_log_marginal(const LabelCounts& k) {
    const double ell = static_cast<double>(k.ell());
    const double c = static_cast<double>(k.total());
    double out = log2_gamma(ell) - log2_gamma(c + ell);
    for (const std::uint64_t cy : k.counts)
        out += log2_gamma(static_cast<double>(cy) + 1.0);
    return out;
}

// KL from the flat-prior posterior to the flat prior, in bits
inline double dirichlet_inference_info(const LabelCounts& k) {
    const double ell = static_cast<double>(k.ell());
    const double c = static_cast<double>(k.total());
    double nats = log_gamma(c + ell) - log_gamma(ell) - c * digamma(c + ell);
    for (const std::uint64_t cy : k.counts) {
        const double cyd = static_cast<double>(cy);
        nats += cyd * digamma(cyd + 1.0) - log_gamma(cyd + 1.0);
    }
    return nats / std::numbers::ln2;
}

// expected information gained about the observed labels relative to the
// uniform baseline, under the posterior
inline double dirichlet_prediction_info(const LabelCounts& k) {
    const double ell = static_cast<double>(k.ell());
    const double c = static_cast<double>(k.total());
    double nats = c * std::log(ell) - c * digamma(c + ell);
    for (const std::uint64_t cy : k.counts) {
        const double cyd = static_cast<double>(cy);
        nats += cyd * digamma(cyd + 1.0);
    }
    return nats / std::numbers::ln2;
}

// posterior predictive (C_y + 1) / (c + ell)
inline DiscreteDist laplace_rule(const LabelCounts& k) {
    const double denom = static_cast<double>(k.total()) + static_cast<double>(k.ell());
    std::vector<double> p;
    p.reserve(k.ell());
    for (const std::uint64_t cy : k.counts)
        p.push_back((static_cast<double>(cy) + 1.0) / denom);
    return DiscreteDist::from_weights(std::move(p));
}

struct ParsimonyReport {
    double prediction_info = 0.0;
    double inference_info = 0.0;
    double description_length_expected = 0.0;
    double q_entropy = 0.0;
    double omega = 0.0;
    double chi = 0.0;
};

struct EnsembleMember {
    std::string key;  // canonical serialization; members with equal keys are merged
    double description_length = 0.0;
    double inference_info = 0.0;
    double prediction_info = 0.0;
};

// Aggregate the three expectations and the ensemble entropy into the parsimony
// objective omega and the memorization complexity chi. Duplicate descriptions
// are merged (their weights summed) before the entropy term: repeated samples
// of one description carry no entropy.
inline ParsimonyReport parsimony_report(const std::vector<EnsembleMember>& members,
                                        const DiscreteDist& q_weights) {
    if (members.size() != q_weights.size())
        throw NotNormalized("one weight per ensemble member required");
    std::unordered_map<std::string, std::size_t> index;
    std::vector<EnsembleMember> merged;
    std::vector<double> weight;
    for (std::size_t i = 0; i < members.size(); ++i) {
        const auto [it, inserted] = index.try_emplace(members[i].key, merged.size());
        if (inserted) {
            merged.push_back(members[i]);
            weight.push_back(q_weights[i]);
        } else {
            const EnsembleMember& seen = merged[it->second];
            if (std::abs(seen.description_length - members[i].description_length) > 1e-9)
                throw Malformed("duplicate key with conflicting description length");
            weight[it->second] += q_weights[i];
        }
    }
    ParsimonyReport r;
    for (std::size_t i = 0; i < merged.size(); ++i) {
        r.prediction_info += weight[i] * merged[i].prediction_info;
        r.inference_info += weight[i] * merged[i].inference_info;
        r.description_length_expected += weight[i] * merged[i].description_length;
    }
    r.q_entropy = entropy(DiscreteDist::from_weights(weight));
    r.omega = r.prediction_info - r.inference_info - r.description_length_expected +
              r.q_entropy;
    r.chi = r.inference_info + r.description_length_expected - r.q_entropy;
    return r;
}

}  // namespace parsimony
