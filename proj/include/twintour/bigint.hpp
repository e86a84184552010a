#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace twintour {

// Unsigned arbitrary-precision integer, base 10^9 limbs. Group orders
// (products of transversal sizes, wreath products) overflow 64 bits quickly,
// so all order arithmetic goes through this type.
class BigUint {
public:
    BigUint() : limbs_{0} {}
    BigUint(uint64_t v) {
        limbs_.clear();
        if (v == 0) limbs_.push_back(0);
        while (v > 0) {
            limbs_.push_back(static_cast<uint32_t>(v % kBase));
            v /= kBase;
        }
    }

    bool is_zero() const { return limbs_.size() == 1 && limbs_[0] == 0; }
    bool is_one() const { return limbs_.size() == 1 && limbs_[0] == 1; }

    BigUint& operator*=(uint64_t m) {
        if (m == 0) {
            limbs_.assign(1, 0);
            return *this;
        }
        uint64_t carry = 0;
        for (auto& limb : limbs_) {
            uint64_t cur = static_cast<uint64_t>(limb) * m + carry;
            limb = static_cast<uint32_t>(cur % kBase);
            carry = cur / kBase;
        }
        while (carry > 0) {
            limbs_.push_back(static_cast<uint32_t>(carry % kBase));
            carry /= kBase;
        }
        return *this;
    }

    BigUint operator*(const BigUint& other) const {
        std::vector<uint64_t> acc(limbs_.size() + other.limbs_.size(), 0);
        for (size_t i = 0; i < limbs_.size(); ++i) {
            uint64_t carry = 0;
            for (size_t j = 0; j < other.limbs_.size(); ++j) {
                uint64_t cur = acc[i + j] +
                               static_cast<uint64_t>(limbs_[i]) * other.limbs_[j] + carry;
                acc[i + j] = cur % kBase;
                carry = cur / kBase;
            }
            size_t k = i + other.limbs_.size();
            while (carry > 0) {
                uint64_t cur = acc[k] + carry;
                acc[k] = cur % kBase;
                carry = cur / kBase;
                ++k;
            }
        }
        BigUint res;
        res.limbs_.assign(acc.begin(), acc.end());
        res.trim();
        return res;
    }

    bool operator==(const BigUint& other) const { return limbs_ == other.limbs_; }
    bool operator!=(const BigUint& other) const { return limbs_ != other.limbs_; }
    bool operator<(const BigUint& other) const {
        if (limbs_.size() != other.limbs_.size())
            return limbs_.size() < other.limbs_.size();
        for (size_t i = limbs_.size(); i-- > 0;) {
            if (limbs_[i] != other.limbs_[i]) return limbs_[i] < other.limbs_[i];
        }
        return false;
    }
    bool operator<=(const BigUint& other) const { return *this < other || *this == other; }

    // Exact division by a small factor; quotient must be exact (used to compare
    // order ratios in tests). Returns false if not divisible.
    bool div_exact(uint64_t m, BigUint& out) const {
        if (m == 0) return false;
        BigUint q;
        q.limbs_.assign(limbs_.size(), 0);
        uint64_t rem = 0;
        for (size_t i = limbs_.size(); i-- > 0;) {
            uint64_t cur = rem * kBase + limbs_[i];
            q.limbs_[i] = static_cast<uint32_t>(cur / m);
            rem = cur % m;
        }
        if (rem != 0) return false;
        q.trim();
        out = q;
        return true;
    }

    // Value fits in uint64_t? (for convenience in tests on small groups)
    bool fits_u64() const {
        if (limbs_.size() > 3) return false;
        unsigned __int128 v = 0;
        for (size_t i = limbs_.size(); i-- > 0;) v = v * kBase + limbs_[i];
        return v <= UINT64_MAX;
    }
    uint64_t as_u64() const {
        uint64_t v = 0;
        for (size_t i = limbs_.size(); i-- > 0;) v = v * kBase + limbs_[i];
        return v;
    }

    std::string str() const {
        std::string s = std::to_string(limbs_.back());
        for (size_t i = limbs_.size() - 1; i-- > 0;) {
            std::string part = std::to_string(limbs_[i]);
            s += std::string(9 - part.size(), '0') + part;
        }
        return s;
    }

private:
    static constexpr uint64_t kBase = 1000000000ull;
    std::vector<uint32_t> limbs_;  // little-endian

    void trim() {
        while (limbs_.size() > 1 && limbs_.back() == 0) limbs_.pop_back();
    }
};

}  // namespace twintour
