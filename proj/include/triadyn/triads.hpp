#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "triadyn/netbuild.hpp"

namespace triadyn {

// A triple of nodes carries 6 directed signed edges; each edge is -1, 0 or +1,
// so there are 3^6 = 729 labeled configurations falling into 138 isomorphism
// classes under relabeling of the three nodes.
inline constexpr int kTriadCodeCount = 729;
inline constexpr int kTriadTypeCount = 138;

// Base-3 encoding of the 6 ordered edge slots (e_ij, e_ji, e_ik, e_ki, e_jk,
// e_kj), digit map {-1 -> 0, 0 -> 1, +1 -> 2}. Slot s is the coefficient of
// 3^s, so e_ij is the least significant digit. The all-null triad is 364 and
// the all-positive one is 728.
struct TriadCode {
    int value = 0;

    friend bool operator==(const TriadCode&, const TriadCode&) = default;
    friend auto operator<=>(const TriadCode&, const TriadCode&) = default;
};

using TriadSigns = std::array<int, 6>;

TriadCode encode_triad(const TriadSigns& signs);
TriadSigns decode_triad(TriadCode code);

// Minimum code over the 6 node-permutation images of the configuration.
TriadCode canonicalize(TriadCode code);

enum class BalanceModel { Classical, Clustering, Transitivity };
inline constexpr std::array<BalanceModel, 3> kAllBalanceModels = {
    BalanceModel::Classical, BalanceModel::Clustering, BalanceModel::Transitivity};

const char* balance_model_name(BalanceModel model);

// True iff no ordered (i, k, j) configuration of the three nodes violates the
// model's closure rule:
//   classical     e_ik != 0 and e_kj != 0            => e_ij == e_ik * e_kj
//   clustering    additionally e_ik > 0 or e_kj > 0  => e_ij == e_ik * e_kj
//   transitivity  e_ik > 0 and e_kj > 0              => e_ij == +1
bool classify_balance(TriadCode code, BalanceModel model);

// Precomputed taxonomy of the 138 canonical classes. Type ids are assigned in
// ascending canonical-code order.
struct TriadTypeTable {
    std::array<std::int16_t, kTriadCodeCount> type_of{};   // code -> type id
    std::array<TriadCode, kTriadTypeCount> canonical_codes{};
    std::array<std::int8_t, kTriadTypeCount> orbit_sizes{};
    std::array<std::array<bool, 3>, kTriadTypeCount> balanced{};  // [type][model]

    bool is_balanced(int type, BalanceModel model) const {
        return balanced[type][static_cast<int>(model)];
    }
    int balanced_count(BalanceModel model) const;
};

// Enumerates all 729 codes and groups them by canonical image. Throws
// AnalysisError if the orbit count is not 138 or flags disagree inside an
// orbit (cannot happen unless the taxonomy code is broken).
TriadTypeTable build_type_table();

struct CensusVector {
    std::array<std::int64_t, kTriadTypeCount> counts{};
    int period_index = 0;

    std::int64_t total() const;
};

struct TransitionCounts {
    std::vector<std::int64_t> counts;  // kTriadTypeCount^2, row-major
    int from_period = 0;
    int to_period = 0;

    TransitionCounts() : counts(static_cast<std::size_t>(kTriadTypeCount) * kTriadTypeCount, 0) {}
    std::int64_t& at(int from, int to) {
        return counts[static_cast<std::size_t>(from) * kTriadTypeCount + to];
    }
    std::int64_t at(int from, int to) const {
        return counts[static_cast<std::size_t>(from) * kTriadTypeCount + to];
    }
};

// Counts the triad type of every unordered node triple among `nodes`
// (registry ids; empty span means all nodes of the network). OpenMP-parallel
// over the triple space; counts are integers so the result is bit-identical
// to the serial reference below.
CensusVector census(const SignedNetwork& net, const TriadTypeTable& table,
                    std::span<const std::int32_t> nodes = {});

// Per-triple type pairs between two consecutive networks over a shared
// registry. Throws InputError when the registries differ.
TransitionCounts transition_counts(const SignedNetwork& net_t, const SignedNetwork& net_t1,
                                   const TriadTypeTable& table,
                                   std::span<const std::int32_t> nodes = {});

// Single-threaded reference implementations used by tests and the benchmark.
namespace serial {
CensusVector census(const SignedNetwork& net, const TriadTypeTable& table,
                    std::span<const std::int32_t> nodes = {});
TransitionCounts transition_counts(const SignedNetwork& net_t, const SignedNetwork& net_t1,
                                   const TriadTypeTable& table,
                                   std::span<const std::int32_t> nodes = {});
}  // namespace serial

// counts / sum(counts); throws AnalysisError on an all-zero census.
std::vector<double> proportion(const CensusVector& census);

// Sum of `prop` over the types flagged balanced under `model`.
double balanced_share(std::span<const double> prop, const TriadTypeTable& table,
                      BalanceModel model);

}  // namespace triadyn
