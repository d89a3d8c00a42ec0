#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "triadyn/ingest.hpp"

namespace triadyn {

// One period's dense signed adjacency over a registry slice. Entries are the
// sign of the summed event weights per ordered pair; diagonal is always 0.
struct SignedNetwork {
    int period_index = 0;
    int n = 0;
    std::vector<std::int8_t> adjacency;      // row-major n*n, entries in {-1,0,+1}
    std::vector<std::int32_t> node_ids;      // local index -> registry id

    std::int8_t at(int i, int j) const {
        return adjacency[static_cast<std::size_t>(i) * n + j];
    }
    std::int8_t& at(int i, int j) {
        return adjacency[static_cast<std::size_t>(i) * n + j];
    }
    // Local position of a registry id, or -1.
    int position_of(std::int32_t node_id) const;
};

// Node sets at this interface are registry ids, so they stay meaningful
// across restriction and across periods.
struct CoreResult {
    std::vector<std::int32_t> core;       // sorted registry ids
    std::vector<std::int32_t> periphery;  // sorted registry ids
};

// A_ij = sign(sum of weights of events i->j in the bucket); sign(0) = 0.
// The network spans the full registry; an empty bucket yields a zero matrix.
SignedNetwork build_network(const EventLog& log, std::span<const std::uint32_t> bucket,
                            int period_index);

// Entrywise sign matrix from per-pair summed weights (exposed for tests and
// dyad statistics).
int sign_of(double x);

// Core = largest strongly connected component of the +1-edge digraph, ties
// broken by smallest minimum registry id. Periphery = non-core nodes with at
// least one positive out-edge into the core.
CoreResult positive_scc(const SignedNetwork& net);

enum class CoreMode { UnionOfCores, FixedList };

// UnionOfCores: union over periods of per-period cores, restricted to nodes
// present in every period's registry slice. FixedList: `fixed_ids` validated
// against every network's registry slice (InputError on unknown ids).
std::vector<std::int32_t> stable_core(std::span<const SignedNetwork> nets, CoreMode mode,
                                      std::span<const std::int32_t> fixed_ids = {});

// Induced subnetwork on `node_ids` (registry ids); relative order of the
// surviving nodes is preserved. InputError on an empty or unknown set.
SignedNetwork restrict_network(const SignedNetwork& net, std::span<const std::int32_t> node_ids);

// Fractions of +1 and -1 entries among the n*(n-1) ordered off-diagonal pairs.
struct DyadFractions {
    double positive = 0.0;
    double negative = 0.0;
};
DyadFractions dyad_fractions(const SignedNetwork& net);

}  // namespace triadyn
