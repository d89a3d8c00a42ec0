#include "triadyn/triads.hpp"

#include <algorithm>

#include "triadyn/error.hpp"

namespace triadyn {

namespace {

// Ordered-pair slot layout over local node labels {0,1,2}:
//   slot 0: (0,1)  slot 1: (1,0)  slot 2: (0,2)
//   slot 3: (2,0)  slot 4: (1,2)  slot 5: (2,1)
constexpr int kSlotSource[6] = {0, 1, 0, 2, 1, 2};
constexpr int kSlotTarget[6] = {1, 0, 2, 0, 2, 1};

constexpr int slot_of(int a, int b) {
    // a != b, both in {0,1,2}
    if (a == 0) return b == 1 ? 0 : 2;
    if (a == 1) return b == 0 ? 1 : 4;
    return b == 0 ? 3 : 5;
}

constexpr int kPermutations[6][3] = {
    {0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0},
};

constexpr int kPow3[6] = {1, 3, 9, 27, 81, 243};

int permute_code(int code, const int* perm) {
    int digits[6];
    for (int s = 0; s < 6; ++s) {
        digits[s] = code % 3;
        code /= 3;
    }
    int image = 0;
    for (int s = 0; s < 6; ++s) {
        image += digits[s] * kPow3[slot_of(perm[kSlotSource[s]], perm[kSlotTarget[s]])];
    }
    return image;
}

}  // namespace

TriadCode encode_triad(const TriadSigns& signs) {
    int code = 0;
    int power = 1;
    for (int s = 0; s < 6; ++s) {
        code += (signs[s] + 1) * power;
        power *= 3;
    }
    return TriadCode{code};
}

TriadSigns decode_triad(TriadCode code) {
    TriadSigns signs{};
    int v = code.value;
    for (int s = 0; s < 6; ++s) {
        signs[s] = v % 3 - 1;
        v /= 3;
    }
    return signs;
}

TriadCode canonicalize(TriadCode code) {
    int best = code.value;
    for (const auto& perm : kPermutations) {
        best = std::min(best, permute_code(code.value, perm));
    }
    return TriadCode{best};
}

const char* balance_model_name(BalanceModel model) {
    switch (model) {
        case BalanceModel::Classical: return "classical";
        case BalanceModel::Clustering: return "clustering";
        case BalanceModel::Transitivity: return "transitivity";
    }
    return "?";
}

bool classify_balance(TriadCode code, BalanceModel model) {
    const TriadSigns e = decode_triad(code);
    // All ordered (i, k, j) triples of the three distinct nodes.
    for (int i = 0; i < 3; ++i) {
        for (int k = 0; k < 3; ++k) {
            for (int j = 0; j < 3; ++j) {
                if (i == k || i == j || k == j) continue;
                const int e_ik = e[slot_of(i, k)];
                const int e_kj = e[slot_of(k, j)];
                const int e_ij = e[slot_of(i, j)];
                bool premise = false;
                switch (model) {
                    case BalanceModel::Classical:
                        premise = e_ik != 0 && e_kj != 0;
                        break;
                    case BalanceModel::Clustering:
                        premise = e_ik != 0 && e_kj != 0 && (e_ik > 0 || e_kj > 0);
                        break;
                    case BalanceModel::Transitivity:
                        premise = e_ik > 0 && e_kj > 0;
                        break;
                }
                if (premise && e_ij != e_ik * e_kj) return false;
            }
        }
    }
    return true;
}

int TriadTypeTable::balanced_count(BalanceModel model) const {
    int count = 0;
    for (int t = 0; t < kTriadTypeCount; ++t) {
        if (is_balanced(t, model)) ++count;
    }
    return count;
}

TriadTypeTable build_type_table() {
    std::array<int, kTriadCodeCount> canon{};
    std::vector<int> canonical_list;
    for (int c = 0; c < kTriadCodeCount; ++c) {
        canon[c] = canonicalize(TriadCode{c}).value;
        if (canon[c] == c) canonical_list.push_back(c);
    }
    if (canonical_list.size() != kTriadTypeCount) {
        throw AnalysisError("triad taxonomy broken: expected 138 classes, got " +
                            std::to_string(canonical_list.size()));
    }
    // canonical_list is ascending by construction of the scan.
    TriadTypeTable table;
    std::array<std::int16_t, kTriadCodeCount> type_of_canon{};
    type_of_canon.fill(-1);
    for (int t = 0; t < kTriadTypeCount; ++t) {
        table.canonical_codes[t] = TriadCode{canonical_list[t]};
        type_of_canon[canonical_list[t]] = static_cast<std::int16_t>(t);
    }
    table.orbit_sizes.fill(0);
    for (int c = 0; c < kTriadCodeCount; ++c) {
        const std::int16_t t = type_of_canon[canon[c]];
        table.type_of[c] = t;
        ++table.orbit_sizes[t];
    }
    for (int t = 0; t < kTriadTypeCount; ++t) {
        for (int m = 0; m < 3; ++m) {
            table.balanced[t][m] =
                classify_balance(table.canonical_codes[t], static_cast<BalanceModel>(m));
        }
    }
    // Balance is a property of the isomorphism class; verify every orbit agrees.
    for (int c = 0; c < kTriadCodeCount; ++c) {
        for (int m = 0; m < 3; ++m) {
            if (classify_balance(TriadCode{c}, static_cast<BalanceModel>(m)) !=
                table.balanced[table.type_of[c]][m]) {
                throw AnalysisError("triad taxonomy broken: balance flag differs inside orbit of code " +
                                    std::to_string(c));
            }
        }
    }
    return table;
}

std::int64_t CensusVector::total() const {
    std::int64_t sum = 0;
    for (std::int64_t c : counts) sum += c;
    return sum;
}

namespace {

std::vector<int> resolve_positions(const SignedNetwork& net, std::span<const std::int32_t> nodes,
                                   const char* op) {
    std::vector<int> pos;
    if (nodes.empty()) {
        pos.resize(net.n);
        for (int i = 0; i < net.n; ++i) pos[i] = i;
    } else {
        pos.reserve(nodes.size());
        for (std::int32_t id : nodes) {
            const int p = net.position_of(id);
            if (p < 0) {
                throw InputError(std::string(op) + ": node id " + std::to_string(id) +
                                 " not in network");
            }
            pos.push_back(p);
        }
    }
    if (pos.size() < 3) throw InputError(std::string(op) + " requires at least 3 nodes");
    return pos;
}

inline int triple_code(const SignedNetwork& net, int i, int j, int k) {
    // Slot order (e_ij, e_ji, e_ik, e_ki, e_jk, e_kj), digit = sign + 1.
    return (net.at(i, j) + 1) + (net.at(j, i) + 1) * 3 + (net.at(i, k) + 1) * 9 +
           (net.at(k, i) + 1) * 27 + (net.at(j, k) + 1) * 81 + (net.at(k, j) + 1) * 243;
}

}  // namespace

CensusVector census(const SignedNetwork& net, const TriadTypeTable& table,
                    std::span<const std::int32_t> nodes) {
    const std::vector<int> pos = resolve_positions(net, nodes, "census");
    CensusVector out;
    out.period_index = net.period_index;
    const int m = static_cast<int>(pos.size());
#pragma omp parallel
    {
        std::array<std::int64_t, kTriadTypeCount> local{};
#pragma omp for schedule(dynamic, 4)
        for (int a = 0; a < m - 2; ++a) {
            for (int b = a + 1; b < m - 1; ++b) {
                for (int c = b + 1; c < m; ++c) {
                    ++local[table.type_of[triple_code(net, pos[a], pos[b], pos[c])]];
                }
            }
        }
#pragma omp critical
        {
            for (int t = 0; t < kTriadTypeCount; ++t) out.counts[t] += local[t];
        }
    }
    return out;
}

TransitionCounts transition_counts(const SignedNetwork& net_t, const SignedNetwork& net_t1,
                                   const TriadTypeTable& table,
                                   std::span<const std::int32_t> nodes) {
    if (net_t.node_ids != net_t1.node_ids) {
        throw InputError("transition_counts: networks do not share a registry slice");
    }
    const std::vector<int> pos = resolve_positions(net_t, nodes, "transition_counts");
    TransitionCounts out;
    out.from_period = net_t.period_index;
    out.to_period = net_t1.period_index;
    const int m = static_cast<int>(pos.size());
#pragma omp parallel
    {
        std::vector<std::int64_t> local(static_cast<std::size_t>(kTriadTypeCount) * kTriadTypeCount, 0);
#pragma omp for schedule(dynamic, 4)
        for (int a = 0; a < m - 2; ++a) {
            for (int b = a + 1; b < m - 1; ++b) {
                for (int c = b + 1; c < m; ++c) {
                    const int from = table.type_of[triple_code(net_t, pos[a], pos[b], pos[c])];
                    const int to = table.type_of[triple_code(net_t1, pos[a], pos[b], pos[c])];
                    ++local[static_cast<std::size_t>(from) * kTriadTypeCount + to];
                }
            }
        }
#pragma omp critical
        {
            for (std::size_t i = 0; i < local.size(); ++i) out.counts[i] += local[i];
        }
    }
    return out;
}

namespace serial {

CensusVector census(const SignedNetwork& net, const TriadTypeTable& table,
                    std::span<const std::int32_t> nodes) {
    const std::vector<int> pos = resolve_positions(net, nodes, "census");
    CensusVector out;
    out.period_index = net.period_index;
    const int m = static_cast<int>(pos.size());
    for (int a = 0; a < m - 2; ++a) {
        for (int b = a + 1; b < m - 1; ++b) {
            for (int c = b + 1; c < m; ++c) {
                ++out.counts[table.type_of[triple_code(net, pos[a], pos[b], pos[c])]];
            }
        }
    }
    return out;
}

TransitionCounts transition_counts(const SignedNetwork& net_t, const SignedNetwork& net_t1,
                                   const TriadTypeTable& table,
                                   std::span<const std::int32_t> nodes) {
    if (net_t.node_ids != net_t1.node_ids) {
        throw InputError("transition_counts: networks do not share a registry slice");
    }
    const std::vector<int> pos = resolve_positions(net_t, nodes, "transition_counts");
    TransitionCounts out;
    out.from_period = net_t.period_index;
    out.to_period = net_t1.period_index;
    const int m = static_cast<int>(pos.size());
    for (int a = 0; a < m - 2; ++a) {
        for (int b = a + 1; b < m - 1; ++b) {
            for (int c = b + 1; c < m; ++c) {
                const int from = table.type_of[triple_code(net_t, pos[a], pos[b], pos[c])];
                const int to = table.type_of[triple_code(net_t1, pos[a], pos[b], pos[c])];
                ++out.at(from, to);
            }
        }
    }
    return out;
}

}  // namespace serial

std::vector<double> proportion(const CensusVector& census) {
    const std::int64_t total = census.total();
    if (total <= 0) throw AnalysisError("proportion: all-zero census");
    std::vector<double> prop(kTriadTypeCount);
    for (int t = 0; t < kTriadTypeCount; ++t) {
        prop[t] = static_cast<double>(census.counts[t]) / static_cast<double>(total);
    }
    return prop;
}

double balanced_share(std::span<const double> prop, const TriadTypeTable& table,
                      BalanceModel model) {
    double share = 0.0;
    for (int t = 0; t < kTriadTypeCount && t < static_cast<int>(prop.size()); ++t) {
        if (table.is_balanced(t, model)) share += prop[t];
    }
    return share;
}

}  // namespace triadyn
