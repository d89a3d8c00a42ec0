#include "triadyn/netbuild.hpp"

#include <algorithm>
#include <limits>
#include <set>

#include "triadyn/error.hpp"

namespace triadyn {

int sign_of(double x) {
    if (x > 0.0) return 1;
    if (x < 0.0) return -1;
    return 0;
}

int SignedNetwork::position_of(std::int32_t node_id) const {
    for (int i = 0; i < n; ++i) {
        if (node_ids[i] == node_id) return i;
    }
    return -1;
}

SignedNetwork build_network(const EventLog& log, std::span<const std::uint32_t> bucket,
                            int period_index) {
    const int n = static_cast<int>(log.actor_registry.size());
    std::vector<double> sums(static_cast<std::size_t>(n) * n, 0.0);
    for (std::uint32_t idx : bucket) {
        const Event& ev = log.events[idx];
        sums[static_cast<std::size_t>(ev.source) * n + ev.target] += ev.weight;
    }
    SignedNetwork net;
    net.period_index = period_index;
    net.n = n;
    net.adjacency.resize(sums.size());
    net.node_ids.resize(n);
    for (int i = 0; i < n; ++i) net.node_ids[i] = i;
    for (std::size_t k = 0; k < sums.size(); ++k) {
        net.adjacency[k] = static_cast<std::int8_t>(sign_of(sums[k]));
    }
    for (int i = 0; i < n; ++i) net.at(i, i) = 0;
    return net;
}

namespace {

// Iterative Tarjan over the +1-edge digraph.
std::vector<int> positive_scc_ids(const SignedNetwork& net, int& scc_count) {
    const int n = net.n;
    std::vector<int> index(n, -1), lowlink(n, 0), comp(n, -1);
    std::vector<bool> on_stack(n, false);
    std::vector<int> stack;
    scc_count = 0;
    int next_index = 0;

    struct Frame {
        int v;
        int next_child;
    };
    std::vector<Frame> call;

    for (int root = 0; root < n; ++root) {
        if (index[root] != -1) continue;
        call.push_back({root, 0});
        index[root] = lowlink[root] = next_index++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!call.empty()) {
            Frame& f = call.back();
            const int v = f.v;
            bool descended = false;
            while (f.next_child < n) {
                const int w = f.next_child++;
                if (net.at(v, w) != 1) continue;
                if (index[w] == -1) {
                    index[w] = lowlink[w] = next_index++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    call.push_back({w, 0});
                    descended = true;
                    break;
                }
                if (on_stack[w]) lowlink[v] = std::min(lowlink[v], index[w]);
            }
            if (descended) continue;
            if (lowlink[v] == index[v]) {
                int w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    comp[w] = scc_count;
                } while (w != v);
                ++scc_count;
            }
            call.pop_back();
            if (!call.empty()) {
                const int parent = call.back().v;
                lowlink[parent] = std::min(lowlink[parent], lowlink[v]);
            }
        }
    }
    return comp;
}

}  // namespace

CoreResult positive_scc(const SignedNetwork& net) {
    int scc_count = 0;
    const std::vector<int> comp = positive_scc_ids(net, scc_count);

    std::vector<int> size(scc_count, 0);
    std::vector<std::int32_t> min_id(scc_count, std::numeric_limits<std::int32_t>::max());
    for (int v = 0; v < net.n; ++v) {
        ++size[comp[v]];
        min_id[comp[v]] = std::min(min_id[comp[v]], net.node_ids[v]);
    }
    int best = 0;
    for (int c = 1; c < scc_count; ++c) {
        if (size[c] > size[best] || (size[c] == size[best] && min_id[c] < min_id[best])) best = c;
    }

    CoreResult result;
    std::vector<bool> in_core(net.n, false);
    for (int v = 0; v < net.n; ++v) {
        if (comp[v] == best) {
            in_core[v] = true;
            result.core.push_back(net.node_ids[v]);
        }
    }
    for (int v = 0; v < net.n; ++v) {
        if (in_core[v]) continue;
        for (int w = 0; w < net.n; ++w) {
            if (in_core[w] && net.at(v, w) == 1) {
                result.periphery.push_back(net.node_ids[v]);
                break;
            }
        }
    }
    std::sort(result.core.begin(), result.core.end());
    std::sort(result.periphery.begin(), result.periphery.end());
    return result;
}

std::vector<std::int32_t> stable_core(std::span<const SignedNetwork> nets, CoreMode mode,
                                      std::span<const std::int32_t> fixed_ids) {
    if (nets.empty()) throw InputError("stable_core requires at least one network");

    if (mode == CoreMode::FixedList) {
        std::vector<std::int32_t> ids(fixed_ids.begin(), fixed_ids.end());
        std::sort(ids.begin(), ids.end());
        ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
        for (const SignedNetwork& net : nets) {
            for (std::int32_t id : ids) {
                if (net.position_of(id) < 0) {
                    throw InputError("fixed core node id " + std::to_string(id) +
                                     " is absent from period " + std::to_string(net.period_index));
                }
            }
        }
        return ids;
    }

    // Nodes present in every period's registry slice.
    std::set<std::int32_t> present(nets.front().node_ids.begin(), nets.front().node_ids.end());
    for (const SignedNetwork& net : nets.subspan(1)) {
        std::set<std::int32_t> here(net.node_ids.begin(), net.node_ids.end());
        std::set<std::int32_t> kept;
        std::set_intersection(present.begin(), present.end(), here.begin(), here.end(),
                              std::inserter(kept, kept.begin()));
        present.swap(kept);
    }

    std::set<std::int32_t> acc;
    for (const SignedNetwork& net : nets) {
        for (std::int32_t id : positive_scc(net).core) {
            if (present.count(id)) acc.insert(id);
        }
    }
    return std::vector<std::int32_t>(acc.begin(), acc.end());
}

SignedNetwork restrict_network(const SignedNetwork& net, std::span<const std::int32_t> node_ids) {
    if (node_ids.empty()) throw InputError("cannot restrict to an empty node set");
    std::set<std::int32_t> wanted(node_ids.begin(), node_ids.end());
    std::vector<int> keep;
    for (int i = 0; i < net.n; ++i) {
        if (wanted.count(net.node_ids[i])) {
            keep.push_back(i);
            wanted.erase(net.node_ids[i]);
        }
    }
    if (!wanted.empty()) {
        throw InputError("restriction set contains " + std::to_string(wanted.size()) +
                         " node id(s) not in the network");
    }
    SignedNetwork out;
    out.period_index = net.period_index;
    out.n = static_cast<int>(keep.size());
    out.adjacency.resize(static_cast<std::size_t>(out.n) * out.n);
    out.node_ids.resize(out.n);
    for (int a = 0; a < out.n; ++a) {
        out.node_ids[a] = net.node_ids[keep[a]];
        for (int b = 0; b < out.n; ++b) {
            out.at(a, b) = net.at(keep[a], keep[b]);
        }
    }
    return out;
}

DyadFractions dyad_fractions(const SignedNetwork& net) {
    if (net.n < 2) return {};
    std::int64_t pos = 0, neg = 0;
    for (int i = 0; i < net.n; ++i) {
        for (int j = 0; j < net.n; ++j) {
            if (i == j) continue;
            if (net.at(i, j) == 1) ++pos;
            if (net.at(i, j) == -1) ++neg;
        }
    }
    const double pairs = static_cast<double>(net.n) * (net.n - 1);
    return {static_cast<double>(pos) / pairs, static_cast<double>(neg) / pairs};
}

}  // namespace triadyn
