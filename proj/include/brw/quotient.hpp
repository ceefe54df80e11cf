#pragma once

#include <optional>
#include <string>
#include <vector>

#include "brw/family.hpp"
#include "brw/multigraph.hpp"

namespace brw {

/// Vertex partition of a finite multigraph. Blocks are numbered canonically:
/// sorted by (size, smallest member index).
struct Partition {
    std::vector<int> block_of;
    int block_count = 0;
    bool float_tolerance_used = false; // signatures compared at 1e-9

    std::vector<std::vector<int>> blocks() const;
};

/// Coarsest equitable partition refining the seed (default: one block).
/// All vertices of a block end up with identical class-wise outgoing weight
/// sums; the result is a fixed point and independent of processing order.
Partition refine_partition(const WeightedMultigraph& g,
                           const std::optional<Partition>& seed = std::nullopt);

struct QuotientResult {
    WeightedMultigraph quotient;
    Partition partition;
};

/// Quotient multigraph of an equitable partition; re-verifies
/// well-definedness across all representatives and reports a violating
/// (x, x', block) triple otherwise.
QuotientResult build_quotient(const WeightedMultigraph& g, const Partition& p);

struct VerifyReport {
    bool pass = false;
    int radius = 0;
    int interior_checked = 0;
    int transport_horizon = 0;
    bool float_tolerance_used = false;
    std::string violation; // empty when pass

    explicit operator bool() const { return pass; }
};

/// Checks the local-isomorphism condition at every interior vertex of
/// B(root, radius) and the walk-total transport T_root^n(X) = T^n(Y) for
/// n <= radius-1. Violations are data (reported), not errors.
VerifyReport verify_local_isomorphism(const GraphFamily& g, const KnownQuotient& q, int radius,
                                      std::size_t max_vertices = 6'000'000);

} // namespace brw
