#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <string_view>

#include "txg/errors.hpp"

namespace txg {

inline constexpr int kMaxLength = 24;  // 2^m-length dense vectors stay desk-scale

// Fixed-length vector over GF(2). Component j (1-indexed) lives at machine
// bit j-1 of a single word. Text form: leftmost character is component 1,
// so "101" has components 1 and 3 set and word value 0b101 = 5.
class BitVector {
public:
    BitVector(int length, std::uint32_t word) : m_(length), word_(word) {
        if (length < 1 || length > kMaxLength)
            throw validation_error("bit vector length " + std::to_string(length) +
                                   " outside [1, " + std::to_string(kMaxLength) + "]");
        if (word >> length)
            throw validation_error("bit vector word has bits above position " +
                                   std::to_string(length - 1));
    }

    static BitVector zero(int length) { return BitVector(length, 0); }

    // Characteristic vector of {j}, 1 <= j <= length.
    static BitVector basis(int j, int length) {
        if (j < 1 || j > length)
            throw validation_error("basis index " + std::to_string(j) + " outside [1, " +
                                   std::to_string(length) + "]");
        return BitVector(length, std::uint32_t{1} << (j - 1));
    }

    static BitVector parse(std::string_view text) {
        if (text.empty() || text.size() > kMaxLength)
            throw validation_error("bitstring length " + std::to_string(text.size()) +
                                   " outside [1, " + std::to_string(kMaxLength) + "]");
        std::uint32_t word = 0;
        for (std::size_t pos = 0; pos < text.size(); ++pos) {
            char c = text[pos];
            if (c == '1')
                word |= std::uint32_t{1} << pos;
            else if (c != '0')
                throw validation_error(std::string("bitstring character '") + c + "'");
        }
        return BitVector(static_cast<int>(text.size()), word);
    }

    int length() const { return m_; }
    std::uint32_t word() const { return word_; }

    // Component j of the 1-indexed convention.
    int bit(int j) const { return static_cast<int>((word_ >> (j - 1)) & 1u); }

    int popcount() const { return std::popcount(word_); }
    bool is_zero() const { return word_ == 0; }

    std::string str() const {
        std::string out(static_cast<std::size_t>(m_), '0');
        for (int j = 1; j <= m_; ++j)
            if (bit(j)) out[static_cast<std::size_t>(j - 1)] = '1';
        return out;
    }

    friend BitVector operator^(const BitVector& x, const BitVector& y) {
        if (x.m_ != y.m_)
            throw dimension_error("xor of lengths " + std::to_string(x.m_) + " and " +
                                  std::to_string(y.m_));
        return BitVector(x.m_, x.word_ ^ y.word_);
    }

    friend bool operator==(const BitVector& x, const BitVector& y) {
        return x.m_ == y.m_ && x.word_ == y.word_;
    }

private:
    int m_;
    std::uint32_t word_;
};

// Inner product modulo 2: parity of the componentwise AND.
inline int dot(const BitVector& x, const BitVector& y) {
    if (x.length() != y.length())
        throw dimension_error("dot of lengths " + std::to_string(x.length()) + " and " +
                              std::to_string(y.length()));
    return std::popcount(x.word() & y.word()) & 1;
}

}  // namespace txg
