#pragma once

// Gibbs sampling over prefix-encoded Chebyshev polynomials. A model is a
// degree plus one binary fraction per coefficient; its description length acts
// as a prior, so short polynomials are favored unless the data pays for more.
// Includes ensemble prediction and a leave-one-out least-squares baseline.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "parsimony/codecs.hpp"
#include "parsimony/errors.hpp"
#include "parsimony/rng.hpp"
#include "parsimony/special.hpp"

namespace parsimony {

// Canonical form: the leading coefficient is not 1/2 unless the degree is 0.
// A fraction of 1/2 maps to the real coefficient 0, so trailing halves are
// trailing zero coefficients and carry no information.
struct PolyDescription {
    std::vector<BinaryFraction> coeffs;  // index = basis order, size degree+1

    std::uint32_t degree() const { return static_cast<std::uint32_t>(coeffs.size()) - 1; }
    bool operator==(const PolyDescription&) const = default;
};

inline PolyDescription zero_polynomial() { return {{BinaryFraction(0, 1)}}; }

inline bool is_canonical(const PolyDescription& d) {
    if (d.coeffs.empty()) return false;
    return d.coeffs.size() == 1 || !(d.coeffs.back() == BinaryFraction(0, 1));
}

inline PolyDescription canonical(std::vector<BinaryFraction> coeffs) {
    while (coeffs.size() > 1 && coeffs.back() == BinaryFraction(0, 1)) coeffs.pop_back();
    if (coeffs.empty()) return zero_polynomial();
    return {std::move(coeffs)};
}

struct RegressionConfig {
    std::uint32_t max_degree = 20;
    std::uint32_t z_max = 4;
    IntCodeScheme degree_code = IntCodeScheme::length_symbol(4);
    IntCodeScheme fraction_z_code = IntCodeScheme::length_symbol(4);
    RealMap coeff_map = RealMap::tangent;
    double coeff_scale = 1.0;
    double noise_sigma = 1.0;
    std::uint32_t samples = 200;
    std::uint64_t seed = 0;

    // Requested bounds clipped to what the chosen codes can actually express.
    std::uint32_t effective_max_degree() const {
        std::uint64_t cap = max_degree;
        if (const auto mx = degree_code.max_value()) cap = std::min<std::uint64_t>(cap, *mx);
        return static_cast<std::uint32_t>(cap);
    }
    std::uint32_t effective_z_max() const {
        return std::min(z_max, max_fraction_z(fraction_z_code));
    }
};

// Abscissas live on [-1,1] via an affine map of the observed range; ordinates
// are divided by noise_sigma so the likelihood is unit-variance Gaussian.
struct RegressionDataset {
    std::vector<double> x;  // scaled
    std::vector<double> y;  // scaled
    double x_lo = 0.0;
    double x_hi = 0.0;
    double noise_sigma = 1.0;

    double scale_x(double raw) const {
        if (x_hi == x_lo) return 0.0;
        return -1.0 + 2.0 * (raw - x_lo) / (x_hi - x_lo);
    }
};

inline RegressionDataset make_dataset(const std::vector<double>& xs,
                                      const std::vector<double>& ys,
                                      double noise_sigma = 1.0) {
    if (xs.size() != ys.size()) throw OutOfRange("x and y lengths differ");
    if (!(noise_sigma > 0.0)) throw OutOfRange("noise sigma must be positive");
    RegressionDataset d;
    d.noise_sigma = noise_sigma;
    if (!xs.empty()) {
        d.x_lo = *std::min_element(xs.begin(), xs.end());
        d.x_hi = *std::max_element(xs.begin(), xs.end());
    }
    d.x.reserve(xs.size());
    d.y.reserve(ys.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        d.x.push_back(d.scale_x(xs[i]));
        d.y.push_back(ys[i] / noise_sigma);
    }
    return d;
}

// Clenshaw recurrence for sum c_j T_j(x). Well defined for any real x; values
// outside [-1,1] extrapolate, which prediction relies on.
inline double chebyshev_eval(const std::vector<double>& coeffs, double x) {
    if (coeffs.empty()) return 0.0;
    double b1 = 0.0, b2 = 0.0;
    for (std::size_t j = coeffs.size(); j-- > 1;) {
        const double b0 = 2.0 * x * b1 - b2 + coeffs[j];
        b2 = b1;
        b1 = b0;
    }
    return x * b1 - b2 + coeffs[0];
}

inline std::vector<double> coeff_values(const PolyDescription& d, const RegressionConfig& cfg) {
    std::vector<double> r;
    r.reserve(d.coeffs.size());
    for (const BinaryFraction& f : d.coeffs)
        r.push_back(fraction_to_real(f, cfg.coeff_map, cfg.coeff_scale));
    return r;
}

inline Code encode_description(const PolyDescription& d, const RegressionConfig& cfg) {
    if (!is_canonical(d)) throw Malformed("description is not canonical");
    if (d.degree() > cfg.max_degree) throw OutOfRange("degree exceeds the configured bound");
    Code code = integer_encode(cfg.degree_code, d.degree());
    for (const BinaryFraction& f : d.coeffs)
        code.append(fraction_encode(cfg.fraction_z_code, f));
    return code;
}

inline double description_length(const PolyDescription& d, const RegressionConfig& cfg) {
    return encode_description(d, cfg).generalized_length();
}

inline PolyDescription decode_description(std::string_view bits, const RegressionConfig& cfg) {
    const DecodeResult deg = integer_decode(cfg.degree_code, bits);
    std::size_t pos = deg.consumed;
    std::vector<BinaryFraction> coeffs;
    for (std::uint64_t j = 0; j <= deg.value; ++j) {
        const FractionDecodeResult f = fraction_decode(cfg.fraction_z_code, bits.substr(pos));
        pos += f.consumed;
        coeffs.push_back(f.value);
    }
    if (pos != bits.size()) throw Malformed("trailing bits after description");
    PolyDescription d{std::move(coeffs)};
    if (!is_canonical(d)) throw Malformed("decoded description is not canonical");
    return d;
}

enum class HyperpriorMode { parsimonious, flat };

// log2 of the unit-variance Gaussian likelihood of the scaled data
inline double log_likelihood(const PolyDescription& d, const RegressionDataset& data,
                             const RegressionConfig& cfg) {
    const std::vector<double> r = coeff_values(d, cfg);
    const double c0 = -0.5 * std::log2(2.0 * std::numbers::pi);
    const double inv = 1.0 / (2.0 * std::numbers::ln2);
    double acc = 0.0;
    for (std::size_t i = 0; i < data.x.size(); ++i) {
        const double e = data.y[i] - chebyshev_eval(r, data.x[i]);
        acc += c0 - e * e * inv;
    }
    return acc;
}

inline double log_posterior_weight(const PolyDescription& d, const RegressionDataset& data,
                                   const RegressionConfig& cfg,
                                   HyperpriorMode mode = HyperpriorMode::parsimonious) {
    double w = log_likelihood(d, data, cfg);
    if (mode == HyperpriorMode::parsimonious) w -= description_length(d, cfg);
    return w;
}

// All fractions with precision z <= z_cap, in enumeration order: position in
// the list equals (2^z - 1) + (i - 1).
inline std::vector<BinaryFraction> fraction_alphabet(std::uint32_t z_cap) {
    std::vector<BinaryFraction> a;
    for (std::uint32_t z = 0; z <= z_cap; ++z)
        for (std::uint64_t i = 1; i <= (std::uint64_t{1} << z); ++i) a.emplace_back(z, i);
    return a;
}

// The conditional update slice at coordinate j: every representable value pair
// over positions (j, k) where k is the leading nonzero coefficient index (0
// for the zero polynomial). Contains the current state by construction.
inline std::vector<PolyDescription> proposal_slice(const PolyDescription& state, std::size_t j,
                                                   const RegressionConfig& cfg) {
    const std::uint32_t b = cfg.effective_max_degree();
    if (!is_canonical(state)) throw Malformed("state is not canonical");
    if (j > b) throw OutOfRange("coordinate exceeds the effective degree bound");
    const std::vector<BinaryFraction> alphabet = fraction_alphabet(cfg.effective_z_max());
    std::vector<BinaryFraction> padded(b + 1, BinaryFraction(0, 1));
    std::copy(state.coeffs.begin(), state.coeffs.end(), padded.begin());
    const std::size_t k = state.degree();
    std::vector<PolyDescription> out;
    if (j == k) {
        out.reserve(alphabet.size());
        for (const BinaryFraction& fj : alphabet) {
            padded[j] = fj;
            out.push_back(canonical(padded));
        }
    } else {
        out.reserve(alphabet.size() * alphabet.size());
        for (const BinaryFraction& fj : alphabet)
            for (const BinaryFraction& fk : alphabet) {
                padded[j] = fj;
                padded[k] = fk;
                out.push_back(canonical(padded));
            }
    }
    return out;
}

// One full conditional sweep. Each coordinate update enumerates its slice and
// samples proportionally to 2^(log posterior weight). A sampled move can land
// in a state whose leading index, hence whose slice, differs from the current
// one; such moves pass through a Metropolis acceptance using the ratio of
// total slice masses, which restores exact stationarity of the target.
class GibbsSampler {
  public:
    GibbsSampler(const RegressionDataset& data, const RegressionConfig& cfg, HyperpriorMode mode)
        : data_(data),
          cfg_(cfg),
          mode_(mode),
          b_(cfg.effective_max_degree()),
          alphabet_(fraction_alphabet(cfg.effective_z_max())),
          lik_const_(-0.5 * std::log2(2.0 * std::numbers::pi) *
                     static_cast<double>(data.x.size())) {
        vals_.reserve(alphabet_.size());
        lens_.reserve(alphabet_.size());
        for (const BinaryFraction& f : alphabet_) {
            vals_.push_back(fraction_to_real(f, cfg_.coeff_map, cfg_.coeff_scale));
            lens_.push_back(fraction_encode(cfg_.fraction_z_code, f).generalized_length());
        }
        deg_lens_.reserve(b_ + 1);
        for (std::uint32_t d = 0; d <= b_; ++d)
            deg_lens_.push_back(integer_encode(cfg_.degree_code, d).generalized_length());

        const std::size_t n = data_.x.size();
        basis_.assign(b_ + 1, std::vector<double>(n));
        for (std::size_t i = 0; i < n; ++i) basis_[0][i] = 1.0;
        if (b_ >= 1)
            for (std::size_t i = 0; i < n; ++i) basis_[1][i] = data_.x[i];
        for (std::uint32_t j = 2; j <= b_; ++j)
            for (std::size_t i = 0; i < n; ++i)
                basis_[j][i] = 2.0 * data_.x[i] * basis_[j - 1][i] - basis_[j - 2][i];

        set_state(zero_polynomial());
    }

    void set_state(const PolyDescription& s) {
        if (!is_canonical(s)) throw Malformed("state is not canonical");
        if (s.degree() > b_) throw OutOfRange("state degree exceeds the effective bound");
        idx_.assign(b_ + 1, 0);
        for (std::size_t j = 0; j < s.coeffs.size(); ++j) {
            const BinaryFraction& f = s.coeffs[j];
            const std::uint64_t pos = ((std::uint64_t{1} << f.z) - 1) + (f.i - 1);
            if (pos >= alphabet_.size())
                throw OutOfRange("state coefficient outside the proposal alphabet");
            idx_[j] = static_cast<std::uint32_t>(pos);
        }
        resid_ = data_.y;
        for (std::uint32_t j = 0; j <= b_; ++j) {
            if (idx_[j] == 0) continue;
            const double v = vals_[idx_[j]];
            for (std::size_t i = 0; i < resid_.size(); ++i) resid_[i] -= v * basis_[j][i];
        }
    }

    PolyDescription state() const {
        std::vector<BinaryFraction> coeffs;
        coeffs.reserve(leading_index() + 1);
        for (std::size_t j = 0; j <= leading_index(); ++j) coeffs.push_back(alphabet_[idx_[j]]);
        return canonical(std::move(coeffs));
    }

    void sweep(Rng& rng) {
        for (const std::size_t j : rng.permutation(b_ + 1)) update_coordinate(j, rng);
        // incremental residual updates drift over long runs; resync cheaply
        if ((++sweep_count_ & 0xffu) == 0) set_state(state());
    }

  private:
    std::size_t leading_index() const {
        for (std::size_t j = b_ + 1; j-- > 1;)
            if (idx_[j] != 0) return j;
        return 0;
    }

    struct Slice {
        std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;  // values at (j, k)
        std::vector<double> weights;                                 // log2, unnormalized
        double log2_mass;
    };

    // Enumerate the slice at coordinates (j, k) around the current state,
    // assuming the current residuals correspond to idx_.
    Slice enumerate_slice(std::size_t j, std::size_t k) const {
        Slice s;
        const std::size_t a = alphabet_.size();
        const bool single = (j == k);
        s.pairs.reserve(single ? a : a * a);
        s.weights.reserve(s.pairs.capacity());

        // highest occupied index outside {j, k}; degree 0 acts as -1 here
        std::ptrdiff_t other_top = -1;
        for (std::size_t t = b_ + 1; t-- > 0;) {
            if (t == j || t == k) continue;
            if (idx_[t] != 0) {
                other_top = static_cast<std::ptrdiff_t>(t);
                break;
            }
        }
        // total code length of coefficients 0..m outside substituted positions
        std::vector<double> prefix(b_ + 2, 0.0);
        for (std::size_t t = 0; t <= b_; ++t)
            prefix[t + 1] = prefix[t] + ((t == j || t == k) ? 0.0 : lens_[idx_[t]]);

        const double inv = 1.0 / (2.0 * std::numbers::ln2);
        const std::vector<double>& bj = basis_[j];
        const std::vector<double>& bk = basis_[k];
        const double cur_vj = vals_[idx_[j]];
        const double cur_vk = vals_[idx_[k]];
        const std::size_t n = resid_.size();

        for (std::size_t aj = 0; aj < a; ++aj) {
            const std::size_t k_lo = single ? aj : 0;
            const std::size_t k_hi = single ? aj + 1 : a;
            for (std::size_t ak = k_lo; ak < k_hi; ++ak) {
                const double dj = vals_[aj] - cur_vj;
                const double dk = single ? 0.0 : vals_[ak] - cur_vk;
                double sse = 0.0;
                if (single) {
                    for (std::size_t i = 0; i < n; ++i) {
                        const double e = resid_[i] - dj * bj[i];
                        sse += e * e;
                    }
                } else {
                    for (std::size_t i = 0; i < n; ++i) {
                        const double e = resid_[i] - dj * bj[i] - dk * bk[i];
                        sse += e * e;
                    }
                }
                double w = lik_const_ - sse * inv;
                if (mode_ == HyperpriorMode::parsimonious) {
                    std::ptrdiff_t deg = other_top;
                    if (aj != 0) deg = std::max(deg, static_cast<std::ptrdiff_t>(j));
                    if (!single && ak != 0) deg = std::max(deg, static_cast<std::ptrdiff_t>(k));
                    if (deg < 0) deg = 0;
                    const std::size_t d = static_cast<std::size_t>(deg);
                    double len = deg_lens_[d] + prefix[d + 1];
                    if (j <= d) len += lens_[aj];
                    if (!single && k <= d) len += lens_[ak];
                    w -= len;
                }
                s.pairs.emplace_back(static_cast<std::uint32_t>(aj),
                                     static_cast<std::uint32_t>(single ? aj : ak));
                s.weights.push_back(w);
            }
        }
        s.log2_mass = log_sum_exp2(s.weights);
        return s;
    }

    std::size_t sample_from(const Slice& s, Rng& rng) const {
        double mx = s.weights[0];
        for (const double w : s.weights) mx = std::max(mx, w);
        double total = 0.0;
        for (const double w : s.weights) total += std::exp2(w - mx);
        double u = rng.uniform() * total;
        for (std::size_t c = 0; c < s.weights.size(); ++c) {
            u -= std::exp2(s.weights[c] - mx);
            if (u <= 0.0) return c;
        }
        return s.weights.size() - 1;
    }

    void apply(std::size_t j, std::uint32_t aj, std::size_t k, std::uint32_t ak) {
        const double dj = vals_[aj] - vals_[idx_[j]];
        const double dk = (k == j) ? 0.0 : vals_[ak] - vals_[idx_[k]];
        for (std::size_t i = 0; i < resid_.size(); ++i)
            resid_[i] -= dj * basis_[j][i] + dk * basis_[k][i];
        idx_[j] = aj;
        idx_[k] = ak;
    }

    void update_coordinate(std::size_t j, Rng& rng) {
        const std::size_t k = leading_index();
        const Slice slice = enumerate_slice(j, k);
        const std::size_t pick = sample_from(slice, rng);
        const auto [aj, ak] = slice.pairs[pick];
        if (aj == idx_[j] && ak == idx_[k]) return;

        // leading index after the move
        std::ptrdiff_t k_new = -1;
        for (std::size_t t = b_ + 1; t-- > 1;) {
            const std::uint32_t v = (t == j) ? aj : (t == k) ? ak : idx_[t];
            if (v != 0) {
                k_new = static_cast<std::ptrdiff_t>(t);
                break;
            }
        }
        if (k_new < 0) k_new = 0;
        const std::size_t kn = static_cast<std::size_t>(k_new);

        if (kn == k) {
            apply(j, aj, k, ak);
            return;
        }

        // The destination's slice spans coordinates (j, k_new). The reverse
        // move must exist and the masses must balance, else reject.
        if (k != j && kn != k && ak != idx_[k]) return;  // current state unreachable back
        const std::uint32_t old_j = idx_[j];
        const std::uint32_t old_k = idx_[k];
        apply(j, aj, k, ak);
        const Slice back = enumerate_slice(j, kn);
        const double log2_accept = slice.log2_mass - back.log2_mass;
        if (log2_accept >= 0.0) return;
        if (std::log2(std::max(rng.uniform(), 1e-300)) < log2_accept) return;
        apply(j, old_j, k, old_k);  // reject: restore
    }

    const RegressionDataset& data_;
    RegressionConfig cfg_;
    HyperpriorMode mode_;
    std::uint32_t b_;
    std::vector<BinaryFraction> alphabet_;
    double lik_const_;
    std::vector<double> vals_;
    std::vector<double> lens_;
    std::vector<double> deg_lens_;
    std::vector<std::vector<double>> basis_;
    std::vector<std::uint32_t> idx_;
    std::vector<double> resid_;
    std::uint64_t sweep_count_ = 0;
};

inline PolyDescription gibbs_sweep(const PolyDescription& state, const RegressionDataset& data,
                                   const RegressionConfig& cfg, Rng& rng,
                                   HyperpriorMode mode = HyperpriorMode::parsimonious) {
    GibbsSampler sampler(data, cfg, mode);
    sampler.set_state(state);
    sampler.sweep(rng);
    return sampler.state();
}

struct PolyEnsemble {
    std::vector<PolyDescription> members;  // one per sweep, in order
    RegressionConfig config;
    HyperpriorMode mode = HyperpriorMode::parsimonious;
    double x_lo = 0.0;
    double x_hi = 0.0;
    double noise_sigma = 1.0;

    double scale_x(double raw) const {
        if (x_hi == x_lo) return 0.0;
        return -1.0 + 2.0 * (raw - x_lo) / (x_hi - x_lo);
    }
};

inline PolyEnsemble sample_ensemble(const RegressionDataset& data, const RegressionConfig& cfg,
                                    HyperpriorMode mode = HyperpriorMode::parsimonious) {
    if (cfg.samples < 1) throw OutOfRange("need at least one sample");
    GibbsSampler sampler(data, cfg, mode);
    Rng rng = make_rng(cfg.seed, "polyreg");
    PolyEnsemble e{{}, cfg, mode, data.x_lo, data.x_hi, data.noise_sigma};
    e.members.reserve(cfg.samples);
    for (std::uint32_t s = 0; s < cfg.samples; ++s) {
        sampler.sweep(rng);
        e.members.push_back(sampler.state());
    }
    return e;
}

// Equal-weight Gaussian mixture over member means; the shared sigma is the
// observation noise in original units.
struct PredictiveMixture {
    std::vector<double> means;
    double sigma = 1.0;

    double mean() const {
        double m = 0.0;
        for (const double v : means) m += v;
        return m / static_cast<double>(means.size());
    }

    // observation variance plus the spread of member means
    double variance() const {
        const double m = mean();
        double between = 0.0;
        for (const double v : means) between += (v - m) * (v - m);
        between /= static_cast<double>(means.size());
        return sigma * sigma + between;
    }

    double density(double y) const {
        const double norm = 1.0 / (sigma * std::sqrt(2.0 * std::numbers::pi));
        double acc = 0.0;
        for (const double v : means) {
            const double t = (y - v) / sigma;
            acc += norm * std::exp(-0.5 * t * t);
        }
        return acc / static_cast<double>(means.size());
    }

    double cdf(double y) const {
        double acc = 0.0;
        for (const double v : means)
            acc += 0.5 * std::erfc(-(y - v) / (sigma * std::numbers::sqrt2));
        return acc / static_cast<double>(means.size());
    }

    double quantile(double p) const {
        if (!(p > 0.0 && p < 1.0)) throw OutOfRange("quantile level must be inside (0,1)");
        double lo = *std::min_element(means.begin(), means.end());
        double hi = *std::max_element(means.begin(), means.end());
        double step = 10.0 * sigma;
        while (cdf(lo) > p) lo -= step, step *= 2.0;
        step = 10.0 * sigma;
        while (cdf(hi) < p) hi += step, step *= 2.0;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            (cdf(mid) < p ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    }
};

inline PredictiveMixture predict(const PolyEnsemble& e, double x_raw) {
    if (e.members.empty()) throw OutOfRange("empty ensemble");
    const double xs = e.scale_x(x_raw);
    PredictiveMixture mix;
    mix.sigma = e.noise_sigma;
    mix.means.reserve(e.members.size());
    for (const PolyDescription& m : e.members)
        mix.means.push_back(e.noise_sigma * chebyshev_eval(coeff_values(m, e.config), xs));
    return mix;
}

// Leave-one-out least squares: for each candidate degree, fit every fold with
// the holdout removed, then keep the full fold-ensemble of the degree with
// the best mean holdout log-likelihood (smallest degree up to ties).
struct LooEnsemble {
    std::uint32_t degree = 0;
    std::vector<std::vector<double>> fold_coeffs;  // scaled-unit Chebyshev coefficients
    std::vector<double> mean_holdout_log2lik;      // by degree, diagnostics
    double x_lo = 0.0;
    double x_hi = 0.0;
    double noise_sigma = 1.0;

    double scale_x(double raw) const {
        if (x_hi == x_lo) return 0.0;
        return -1.0 + 2.0 * (raw - x_lo) / (x_hi - x_lo);
    }
};

inline LooEnsemble loo_baseline(const RegressionDataset& data, std::uint32_t max_degree) {
    const std::size_t n = data.x.size();
    if (n < 2) throw OutOfRange("leave-one-out needs at least two points");

    Eigen::MatrixXd basis(n, max_degree + 1);
    for (std::size_t i = 0; i < n; ++i) {
        basis(i, 0) = 1.0;
        if (max_degree >= 1) basis(i, 1) = data.x[i];
        for (std::uint32_t j = 2; j <= max_degree; ++j)
            basis(i, j) = 2.0 * data.x[i] * basis(i, j - 1) - basis(i, j - 2);
    }

    const double c0 = -0.5 * std::log2(2.0 * std::numbers::pi);
    const double inv = 1.0 / (2.0 * std::numbers::ln2);

    LooEnsemble best;
    best.x_lo = data.x_lo;
    best.x_hi = data.x_hi;
    best.noise_sigma = data.noise_sigma;
    double best_mean = -std::numeric_limits<double>::infinity();

    for (std::uint32_t d = 0; d <= max_degree; ++d) {
        std::vector<std::vector<double>> folds;
        folds.reserve(n);
        double mean_ll = 0.0;
        for (std::size_t h = 0; h < n; ++h) {
            Eigen::MatrixXd a(n - 1, d + 1);
            Eigen::VectorXd b(n - 1);
            std::size_t r = 0;
            for (std::size_t i = 0; i < n; ++i) {
                if (i == h) continue;
                a.row(r) = basis.block(i, 0, 1, d + 1);
                b(r) = data.y[i];
                ++r;
            }
            // minimum-norm solution handles rank-deficient folds
            const Eigen::VectorXd c = a.completeOrthogonalDecomposition().solve(b);
            std::vector<double> coeffs(c.data(), c.data() + c.size());
            const double e = data.y[h] - chebyshev_eval(coeffs, data.x[h]);
            mean_ll += c0 - e * e * inv;
            folds.push_back(std::move(coeffs));
        }
        mean_ll /= static_cast<double>(n);
        best.mean_holdout_log2lik.push_back(mean_ll);
        if (mean_ll > best_mean + 1e-9) {
            best_mean = mean_ll;
            best.degree = d;
            best.fold_coeffs = std::move(folds);
        }
    }
    return best;
}

inline PredictiveMixture predict(const LooEnsemble& e, double x_raw) {
    if (e.fold_coeffs.empty()) throw OutOfRange("empty ensemble");
    const double xs = e.scale_x(x_raw);
    PredictiveMixture mix;
    mix.sigma = e.noise_sigma;
    mix.means.reserve(e.fold_coeffs.size());
    for (const std::vector<double>& c : e.fold_coeffs)
        mix.means.push_back(e.noise_sigma * chebyshev_eval(c, xs));
    return mix;
}

}  // namespace parsimony
