#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <unordered_map>
#include <vector>

#include "rgs/permutation.hpp"

namespace rgs {

/// Lookup tables over all of S_degree: lexicographic element list, cycle
/// counts, inverses, and (for degree <= 6) the full composition table, so
/// enumeration loops reduce to array reads.
class SnTable {
public:
    explicit SnTable(int degree) : degree_(degree) {
        perms_.reserve(factorial(degree));
        for_each_in_sn(degree, [&](const Permutation& p) { perms_.push_back(p); });
        const int size = static_cast<int>(perms_.size());
        index_.reserve(perms_.size());
        for (int i = 0; i < size; ++i) index_[encode(perms_[i])] = i;
        cycle_count_.resize(size);
        inverse_.resize(size);
        for (int i = 0; i < size; ++i) {
            cycle_count_[i] = perms_[i].cycle_count();
            inverse_[i] = index_.at(encode(perms_[i].inverse()));
        }
        if (degree <= 6) {
            product_.assign(size, std::vector<int>(size));
            for (int a = 0; a < size; ++a)
                for (int b = 0; b < size; ++b)
                    product_[a][b] = index_.at(encode(compose(perms_[a], perms_[b])));
        }
    }

    int degree() const { return degree_; }
    int size() const { return static_cast<int>(perms_.size()); }
    const Permutation& perm(int i) const { return perms_[i]; }
    const std::vector<Permutation>& perms() const { return perms_; }
    int index_of(const Permutation& p) const { return index_.at(encode(p)); }
    int inverse(int i) const { return inverse_[i]; }
    int cycles(int i) const { return cycle_count_[i]; }
    int length(int i) const { return degree_ - cycle_count_[i]; }

    int product(int a, int b) const {
        if (!product_.empty()) return product_[a][b];
        return index_.at(encode(compose(perms_[a], perms_[b])));
    }

    // #(a b^-1), the cycle count of perms[a] . perms[b]^-1
    int cycles_of_quotient(int a, int b) const { return cycle_count_[product(a, inverse_[b])]; }
    // |a^-1 b| = |b a^-1|, the transposition distance between elements a and b
    int dist(int a, int b) const { return degree_ - cycles_of_quotient(b, a); }

    static const SnTable& cached(int degree) {
        static std::mutex mu;
        static std::unordered_map<int, std::unique_ptr<SnTable>> cache;
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(degree);
        if (it == cache.end())
            it = cache.emplace(degree, std::make_unique<SnTable>(degree)).first;
        return *it->second;
    }

private:
    std::int64_t encode(const Permutation& p) const {
        std::int64_t code = 0;
        for (int i = 0; i < degree_; ++i) code = code * degree_ + p(i);
        return code;
    }

    int degree_;
    std::vector<Permutation> perms_;
    std::unordered_map<std::int64_t, int> index_;
    std::vector<int> cycle_count_;
    std::vector<int> inverse_;
    std::vector<std::vector<int>> product_;
};

} // namespace rgs
