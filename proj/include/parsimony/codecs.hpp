#pragma once

// Prefix codes for nonnegative integers and binary fractions, with generalized
// code lengths over mixed alphabets. A code is a sequence of symbols, each
// drawn from its own finite alphabet; its generalized length is the sum of
// log2(alphabet size) over the sequence, so an all-binary code's length is its
// bit count. Bit order is MSB-first throughout.

#include <cassert>
#include <cstdint>
#include <cmath>
#include <bit>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "parsimony/errors.hpp"
#include "parsimony/special.hpp"

namespace parsimony {

struct Symbol {
    std::uint32_t index;
    std::uint32_t radix;  // alphabet size; index < radix
};

class Code {
  public:
    void push_symbol(std::uint32_t index, std::uint32_t radix) {
        assert(radix >= 2 && index < radix);
        symbols_.push_back({index, radix});
    }

    void push_bit(bool bit) { push_symbol(bit ? 1u : 0u, 2u); }

    // value's low `count` bits, most significant first
    void push_bits(std::uint64_t value, unsigned count) {
        for (unsigned i = count; i-- > 0;) push_bit((value >> i) & 1u);
    }

    void append(const Code& other) {
        symbols_.insert(symbols_.end(), other.symbols_.begin(), other.symbols_.end());
    }

    const std::vector<Symbol>& symbols() const { return symbols_; }
    std::size_t size() const { return symbols_.size(); }

    bool all_binary() const {
        for (const Symbol& s : symbols_)
            if (s.radix != 2) return false;
        return true;
    }

    // sum of log2(radix); equals the bit count for all-binary codes
    double generalized_length() const {
        double bits = 0.0;
        for (const Symbol& s : symbols_)
            bits += (s.radix == 2) ? 1.0 : std::log2(static_cast<double>(s.radix));
        return bits;
    }

    // '0'/'1' rendering; defined only when every symbol is binary
    std::string bit_string() const {
        std::string out;
        out.reserve(symbols_.size());
        for (const Symbol& s : symbols_) {
            if (s.radix != 2)
                throw Malformed("bit rendering undefined: code contains a non-binary symbol");
            out.push_back(s.index ? '1' : '0');
        }
        return out;
    }

  private:
    std::vector<Symbol> symbols_;
};

enum class CodeKind { unary, elias_gamma, elias_delta, elias_omega, rissanen, length_symbol };

// Integer code selector. rissanen(k) chains k length-of-length recursions;
// length_symbol(m) spends one m-ary symbol on the payload size.
struct IntCodeScheme {
    CodeKind kind;
    std::uint32_t param = 0;  // rissanen: k >= 1; length_symbol: m >= 2

    static IntCodeScheme unary() { return {CodeKind::unary, 0}; }
    static IntCodeScheme elias_gamma() { return {CodeKind::elias_gamma, 0}; }
    static IntCodeScheme elias_delta() { return {CodeKind::elias_delta, 0}; }
    static IntCodeScheme elias_omega() { return {CodeKind::elias_omega, 0}; }
    static IntCodeScheme rissanen(std::uint32_t k) {
        if (k < 1) throw OutOfRange("rissanen recursion count must be >= 1");
        return {CodeKind::rissanen, k};
    }
    static IntCodeScheme length_symbol(std::uint32_t m) {
        if (m < 2) throw OutOfRange("length_symbol alphabet must have >= 2 outcomes");
        return {CodeKind::length_symbol, m};
    }

    // Largest representable value, or nullopt when unbounded (within uint64).
    std::optional<std::uint64_t> max_value() const {
        switch (kind) {
            case CodeKind::unary:
            case CodeKind::elias_gamma:
            case CodeKind::elias_delta:
            case CodeKind::elias_omega:
                return std::nullopt;
            case CodeKind::rissanen: {
                // v_0 = 1; v_{j+1} = 2^{v_j + 1} - 2 (largest value whose
                // chained length fits the previous level)
                std::uint64_t v = 1;
                for (std::uint32_t j = 0; j < param; ++j) {
                    if (v >= 63) return std::nullopt;  // exceeds uint64 at the next level
                    v = (std::uint64_t{1} << (v + 1)) - 2;
                }
                return v;
            }
            case CodeKind::length_symbol:
                if (param >= 64) return std::nullopt;
                return (std::uint64_t{1} << param) - 2;
        }
        return std::nullopt;
    }

    bool operator==(const IntCodeScheme&) const = default;
};

struct DecodeResult {
    std::uint64_t value;
    std::size_t consumed;
};

namespace detail {

// Enumeration of finite bit sequences: "" -> 0, "0" -> 1, "1" -> 2, "00" -> 3, ...
// A value v occupies a sequence of enum_bits(v) bits with content v - (2^len - 1).
inline unsigned enum_bits(std::uint64_t v) {
    return std::bit_width(v + 1) - 1;
}

inline std::uint64_t enum_content(std::uint64_t v) {
    return v - ((std::uint64_t{1} << enum_bits(v)) - 1);
}

inline bool read_bit(std::string_view bits, std::size_t& pos) {
    if (pos >= bits.size()) throw Malformed("bit stream ended early");
    const char c = bits[pos++];
    if (c == '0') return false;
    if (c == '1') return true;
    throw Malformed("bit stream contains a character other than '0'/'1'");
}

inline std::uint64_t read_bits(std::string_view bits, std::size_t& pos, unsigned count) {
    if (count > 63) throw Malformed("bit field too wide");
    std::uint64_t v = 0;
    for (unsigned i = 0; i < count; ++i) v = (v << 1) | (read_bit(bits, pos) ? 1u : 0u);
    return v;
}

// practical guard: unary and Elias codes accept any uint64 in principle, but an
// encode of astronomically large z would just exhaust memory
inline constexpr std::uint64_t unary_encode_cap = std::uint64_t{1} << 26;

}  // namespace detail

inline Code integer_encode(IntCodeScheme scheme, std::uint64_t z) {
    if (const auto mx = scheme.max_value(); mx && z > *mx)
        throw OutOfRange("value not representable by this code");
    Code code;
    switch (scheme.kind) {
        case CodeKind::unary: {
            if (z > detail::unary_encode_cap)
                throw OutOfRange("unary code impractically long");
            for (std::uint64_t i = 0; i < z; ++i) code.push_bit(true);
            code.push_bit(false);
            return code;
        }
        case CodeKind::elias_gamma: {
            // gamma of n = z + 1: (bit count - 1) zeros, then n's binary digits
            const std::uint64_t n = z + 1;
            if (n == 0) throw OutOfRange("value overflows the code");
            const unsigned width = std::bit_width(n);
            for (unsigned i = 1; i < width; ++i) code.push_bit(false);
            code.push_bits(n, width);
            return code;
        }
        case CodeKind::elias_delta: {
            // gamma of n's bit count, then n without its leading one
            const std::uint64_t n = z + 1;
            if (n == 0) throw OutOfRange("value overflows the code");
            const unsigned width = std::bit_width(n);
            code.append(integer_encode(IntCodeScheme::elias_gamma(), width - 1));
            code.push_bits(n & ~(std::uint64_t{1} << (width - 1)), width - 1);
            return code;
        }
        case CodeKind::elias_omega: {
            // recursively prepend binary groups; terminate with a zero bit
            std::uint64_t n = z + 1;
            if (n == 0) throw OutOfRange("value overflows the code");
            std::vector<std::pair<std::uint64_t, unsigned>> groups;
            while (n > 1) {
                const unsigned width = std::bit_width(n);
                groups.emplace_back(n, width);
                n = width - 1;
            }
            for (auto it = groups.rbegin(); it != groups.rend(); ++it)
                code.push_bits(it->first, it->second);
            code.push_bit(false);
            return code;
        }
        case CodeKind::rissanen: {
            // chain backwards: each level's value is the next level's bit count
            const std::uint32_t k = scheme.param;
            std::vector<std::uint64_t> levels(k + 1);
            levels[k] = z;
            for (std::uint32_t j = k; j > 0; --j)
                levels[j - 1] = detail::enum_bits(levels[j]);
            if (levels[0] > 1) throw OutOfRange("value not representable by this code");
            code.push_bit(levels[0] != 0);
            for (std::uint32_t j = 1; j <= k; ++j)
                code.push_bits(detail::enum_content(levels[j]), detail::enum_bits(levels[j]));
            return code;
        }
        case CodeKind::length_symbol: {
            const std::uint32_t m = scheme.param;
            const unsigned s = detail::enum_bits(z);
            assert(s <= m - 1);  // range checked above
            if (std::has_single_bit(m)) {
                code.push_bits(s, std::bit_width(m) - 1);
            } else {
                code.push_symbol(s, m);
            }
            code.push_bits(detail::enum_content(z), s);
            return code;
        }
    }
    throw Malformed("unknown code kind");
}

inline DecodeResult integer_decode(IntCodeScheme scheme, std::string_view bits) {
    std::size_t pos = 0;
    switch (scheme.kind) {
        case CodeKind::unary: {
            std::uint64_t z = 0;
            while (detail::read_bit(bits, pos)) ++z;
            return {z, pos};
        }
        case CodeKind::elias_gamma: {
            unsigned zeros = 0;
            while (!detail::read_bit(bits, pos)) ++zeros;
            if (zeros > 63) throw Malformed("gamma code too wide");
            std::uint64_t n = 1;
            for (unsigned i = 0; i < zeros; ++i)
                n = (n << 1) | (detail::read_bit(bits, pos) ? 1u : 0u);
            return {n - 1, pos};
        }
        case CodeKind::elias_delta: {
            const DecodeResult len = integer_decode(IntCodeScheme::elias_gamma(), bits);
            pos = len.consumed;
            if (len.value > 63) throw Malformed("delta code too wide");
            const unsigned extra = static_cast<unsigned>(len.value);
            std::uint64_t n = 1;
            for (unsigned i = 0; i < extra; ++i)
                n = (n << 1) | (detail::read_bit(bits, pos) ? 1u : 0u);
            return {n - 1, pos};
        }
        case CodeKind::elias_omega: {
            std::uint64_t n = 1;
            for (;;) {
                if (!detail::read_bit(bits, pos)) break;
                if (n > 63) throw Malformed("omega code too wide");
                std::uint64_t next = 1;
                for (std::uint64_t i = 0; i < n; ++i)
                    next = (next << 1) | (detail::read_bit(bits, pos) ? 1u : 0u);
                n = next;
            }
            return {n - 1, pos};
        }
        case CodeKind::rissanen: {
            std::uint64_t v = detail::read_bit(bits, pos) ? 1 : 0;
            for (std::uint32_t j = 0; j < scheme.param; ++j) {
                if (v == 0) continue;  // zero-length segment decodes to zero
                if (v > 63) throw Malformed("rissanen segment too wide");
                const unsigned len = static_cast<unsigned>(v);
                v = ((std::uint64_t{1} << len) - 1) + detail::read_bits(bits, pos, len);
            }
            return {v, pos};
        }
        case CodeKind::length_symbol: {
            const std::uint32_t m = scheme.param;
            if (!std::has_single_bit(m))
                throw Malformed("bit-stream decode needs a power-of-two symbol alphabet");
            const unsigned s =
                static_cast<unsigned>(detail::read_bits(bits, pos, std::bit_width(m) - 1));
            const std::uint64_t v =
                ((std::uint64_t{1} << s) - 1) + detail::read_bits(bits, pos, s);
            return {v, pos};
        }
    }
    throw Malformed("unknown code kind");
}

// q = (2i - 1) / 2^(z+1), i in [1, 2^z]; the odd dyadics of the open unit interval
struct BinaryFraction {
    std::uint32_t z = 0;
    std::uint64_t i = 1;

    BinaryFraction() = default;
    BinaryFraction(std::uint32_t z_, std::uint64_t i_) : z(z_), i(i_) {
        if (z > 62 || i < 1 || i > (std::uint64_t{1} << z))
            throw OutOfRange("binary fraction index out of range");
    }

    double value() const {
        return static_cast<double>(2 * i - 1) / std::exp2(static_cast<double>(z) + 1.0);
    }

    bool operator==(const BinaryFraction&) const = default;
};

// Precision z via the z-scheme, then z numerator bits holding i-1. A
// length_symbol(m) z-scheme spends one direct m-ary symbol on z itself, which
// coincides with its integer code applied to the fraction's enumeration index.
inline Code fraction_encode(IntCodeScheme z_scheme, BinaryFraction f) {
    Code code;
    if (z_scheme.kind == CodeKind::length_symbol) {
        const std::uint32_t m = z_scheme.param;
        if (f.z > m - 1) throw OutOfRange("fraction precision not representable");
        if (std::has_single_bit(m)) {
            code.push_bits(f.z, std::bit_width(m) - 1);
        } else {
            code.push_symbol(f.z, m);
        }
    } else {
        code.append(integer_encode(z_scheme, f.z));
    }
    code.push_bits(f.i - 1, f.z);
    return code;
}

struct FractionDecodeResult {
    BinaryFraction value;
    std::size_t consumed;
};

inline FractionDecodeResult fraction_decode(IntCodeScheme z_scheme, std::string_view bits) {
    std::size_t pos = 0;
    std::uint64_t z;
    if (z_scheme.kind == CodeKind::length_symbol) {
        const std::uint32_t m = z_scheme.param;
        if (!std::has_single_bit(m))
            throw Malformed("bit-stream decode needs a power-of-two symbol alphabet");
        z = detail::read_bits(bits, pos, std::bit_width(m) - 1);
    } else {
        const DecodeResult r = integer_decode(z_scheme, bits);
        z = r.value;
        pos = r.consumed;
    }
    if (z > 62) throw Malformed("fraction precision too wide");
    const std::uint64_t numerator = detail::read_bits(bits, pos, static_cast<unsigned>(z));
    return {BinaryFraction(static_cast<std::uint32_t>(z), numerator + 1), pos};
}

// Largest fraction precision the z-scheme can announce (62 caps the numerator
// at what uint64 holds).
inline std::uint32_t max_fraction_z(IntCodeScheme z_scheme) {
    if (z_scheme.kind == CodeKind::length_symbol) return z_scheme.param - 1;
    if (const auto mx = z_scheme.max_value())
        return static_cast<std::uint32_t>(std::min<std::uint64_t>(*mx, 62));
    return 62;
}

enum class RealMap { tangent, probit };

// Map q in (0,1) onto the real line, scaled. The tangent map wraps the line
// onto the circle; the probit map is the inverse Gaussian CDF times sqrt(2)
// applied through erf^-1.
inline double fraction_to_real(BinaryFraction f, RealMap map, double scale) {
    const double q = f.value();
    switch (map) {
        case RealMap::tangent:
            return scale * std::tan(std::numbers::pi * (q - 0.5));
        case RealMap::probit:
            return scale * probit(q);
    }
    throw Malformed("unknown real map");
}

// Sum of 2^-L(z) for z = 0..up_to (clamped to the representable range).
// Exactly 1 for complete codes over their full range.
inline double kraft_sum(IntCodeScheme scheme, std::uint64_t up_to) {
    if (const auto mx = scheme.max_value()) up_to = std::min(up_to, *mx);
    double acc = 0.0;
    for (std::uint64_t z = 0; z <= up_to; ++z) {
        acc += std::exp2(-integer_encode(scheme, z).generalized_length());
        if (z == UINT64_MAX) break;
    }
    return acc;
}

// MSB-first packing of a '0'/'1' string; the final partial byte is padded with
// zeros on the right, so the bit count must be carried alongside.
inline std::vector<std::uint8_t> pack_bits(std::string_view bits) {
    std::vector<std::uint8_t> out((bits.size() + 7) / 8, 0);
    for (std::size_t idx = 0; idx < bits.size(); ++idx) {
        if (bits[idx] == '1')
            out[idx / 8] |= static_cast<std::uint8_t>(0x80u >> (idx % 8));
        else if (bits[idx] != '0')
            throw Malformed("bit string contains a character other than '0'/'1'");
    }
    return out;
}

inline std::string unpack_bits(const std::vector<std::uint8_t>& bytes, std::size_t bit_count) {
    if (bit_count > bytes.size() * 8) throw Malformed("bit count exceeds packed payload");
    std::string out;
    out.reserve(bit_count);
    for (std::size_t idx = 0; idx < bit_count; ++idx)
        out.push_back((bytes[idx / 8] >> (7 - idx % 8)) & 1 ? '1' : '0');
    return out;
}

}  // namespace parsimony
