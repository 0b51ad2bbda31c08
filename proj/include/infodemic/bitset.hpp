#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <algorithm>
#include <vector>

namespace infodemic {

/// Fixed-size bitset over dense user ids.
class UserBitset {
public:
    UserBitset() = default;
    explicit UserBitset(std::size_t n) : n_(n), words_((n + 63) / 64, 0) {}

    std::size_t size() const { return n_; }
    std::size_t word_count() const { return words_.size(); }
    const std::uint64_t* words() const { return words_.data(); }

    bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1U; }
    void set(std::size_t i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }

    /// Sets bit i and reports whether it was previously clear.
    bool insert(std::size_t i) {
        std::uint64_t& w = words_[i >> 6];
        const std::uint64_t m = std::uint64_t{1} << (i & 63);
        const bool fresh = !(w & m);
        w |= m;
        return fresh;
    }

    void clear() { std::fill(words_.begin(), words_.end(), 0); }

    UserBitset& operator|=(const UserBitset& o) {
        for (std::size_t k = 0; k < words_.size(); ++k) words_[k] |= o.words_[k];
        return *this;
    }

    std::size_t count() const {
        std::size_t c = 0;
        for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }

    template <class F>
    void for_each(F&& f) const {
        for (std::size_t k = 0; k < words_.size(); ++k) {
            std::uint64_t w = words_[k];
            while (w) {
                f(k * 64 + static_cast<std::size_t>(std::countr_zero(w)));
                w &= w - 1;
            }
        }
    }

    bool operator==(const UserBitset&) const = default;

private:
    std::size_t n_ = 0;
    std::vector<std::uint64_t> words_;
};

}  // namespace infodemic
