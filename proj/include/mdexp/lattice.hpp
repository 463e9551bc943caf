#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "mdexp/errors.hpp"
#include "mdexp/lambda.hpp"
#include "mdexp/rational.hpp"

namespace mdexp {

enum class Boundary { open, periodic };

// A finite box of Z^d used for exact matching counts. Periodic boundaries
// require every extent >= 3 to keep the graph simple; total site count is
// capped at 64 (desk scale).
struct LatticeSpec {
    int dimension = 1;
    std::vector<int> extents;
    Boundary boundary = Boundary::open;
};

inline constexpr int kMaxLatticeSites = 64;

// Exact count of m-edge matchings for m = 0..floor(N/2).
struct MatchCountTable {
    int n_sites = 0;
    std::vector<BigInt> counts; // index m

    const BigInt& at(std::size_t m) const { return counts[m]; }
};

namespace detail {

inline int checked_site_count(const LatticeSpec& spec) {
    if (spec.dimension < 1) {
        throw DomainError("lattice dimension must be positive");
    }
    if (static_cast<int>(spec.extents.size()) != spec.dimension) {
        throw DomainError("lattice needs one extent per dimension");
    }
    long sites = 1;
    for (int extent : spec.extents) {
        const int minimum = spec.boundary == Boundary::periodic ? 3 : 1;
        if (extent < minimum) {
            throw DomainError("extent too small for the requested boundary");
        }
        sites *= extent;
        if (sites > kMaxLatticeSites) {
            throw TooLarge("lattice exceeds the 64-site enumeration limit");
        }
    }
    return static_cast<int>(sites);
}

} // namespace detail

// Nearest-neighbor edges of the lattice as sorted site-id pairs. Site ids
// are mixed-radix over the coordinates with the largest extent as the
// slowest axis, which keeps the enumeration frontier small.
inline std::vector<std::pair<int, int>> lattice_edges(const LatticeSpec& spec) {
    const int n_sites = detail::checked_site_count(spec);
    const int dim = spec.dimension;

    std::vector<int> axis_order(static_cast<std::size_t>(dim));
    for (int a = 0; a < dim; ++a) {
        axis_order[static_cast<std::size_t>(a)] = a;
    }
    std::stable_sort(axis_order.begin(), axis_order.end(), [&](int a, int b) {
        return spec.extents[static_cast<std::size_t>(a)] <
               spec.extents[static_cast<std::size_t>(b)];
    });

    std::vector<int> stride(static_cast<std::size_t>(dim), 0);
    int acc = 1;
    for (int axis : axis_order) {
        stride[static_cast<std::size_t>(axis)] = acc;
        acc *= spec.extents[static_cast<std::size_t>(axis)];
    }

    auto site_id = [&](const std::vector<int>& coords) {
        int id = 0;
        for (int a = 0; a < dim; ++a) {
            id += coords[static_cast<std::size_t>(a)] *
                  stride[static_cast<std::size_t>(a)];
        }
        return id;
    };

    std::vector<std::pair<int, int>> edges;
    std::vector<int> coords(static_cast<std::size_t>(dim), 0);
    for (int site = 0; site < n_sites; ++site) {
        const int u = site_id(coords);
        for (int a = 0; a < dim; ++a) {
            const int extent = spec.extents[static_cast<std::size_t>(a)];
            if (extent == 1) {
                continue;
            }
            std::vector<int> next = coords;
            next[static_cast<std::size_t>(a)] += 1;
            if (next[static_cast<std::size_t>(a)] == extent) {
                if (spec.boundary == Boundary::open) {
                    continue;
                }
                next[static_cast<std::size_t>(a)] = 0;
            }
            const int v = site_id(next);
            edges.push_back(std::minmax(u, v));
        }
        for (int a = 0; a < dim; ++a) {
            if (++coords[static_cast<std::size_t>(a)] <
                spec.extents[static_cast<std::size_t>(a)]) {
                break;
            }
            coords[static_cast<std::size_t>(a)] = 0;
        }
    }
    std::sort(edges.begin(), edges.end());
    return edges;
}

// Exact matching counts by frontier dynamic programming: sites are consumed
// in id order, a bitmask records which still-active sites are already
// matched, and sites whose neighbors are all consumed retire from the mask.
// Deterministic and exact (big integers); throws TooLarge beyond 64 sites.
inline MatchCountTable count_matchings(const LatticeSpec& spec) {
    const int n_sites = detail::checked_site_count(spec);
    const auto edges = lattice_edges(spec);

    std::vector<std::vector<int>> earlier_neighbors(
        static_cast<std::size_t>(n_sites));
    std::vector<int> retire_at(static_cast<std::size_t>(n_sites), 0);
    for (int v = 0; v < n_sites; ++v) {
        retire_at[static_cast<std::size_t>(v)] = v;
    }
    for (const auto& [u, v] : edges) {
        earlier_neighbors[static_cast<std::size_t>(v)].push_back(u);
        retire_at[static_cast<std::size_t>(u)] =
            std::max(retire_at[static_cast<std::size_t>(u)], v);
    }

    const std::size_t max_dimers = static_cast<std::size_t>(n_sites / 2);
    using Counts = std::vector<BigInt>;
    std::unordered_map<std::uint64_t, Counts> states;
    states.emplace(0u, Counts(max_dimers + 1, BigInt(0)));
    states.begin()->second[0] = 1;

    std::vector<std::vector<int>> retirees(static_cast<std::size_t>(n_sites));
    for (int u = 0; u < n_sites; ++u) {
        retirees[static_cast<std::size_t>(retire_at[static_cast<std::size_t>(u)])]
            .push_back(u);
    }

    auto merge_into = [](std::unordered_map<std::uint64_t, Counts>& target,
                         std::uint64_t mask, Counts&& counts) {
        auto [it, inserted] = target.try_emplace(mask, std::move(counts));
        if (!inserted) {
            for (std::size_t m = 0; m < it->second.size(); ++m) {
                it->second[m] += counts[m];
            }
        }
    };

    for (int v = 0; v < n_sites; ++v) {
        std::unordered_map<std::uint64_t, Counts> next_states;
        next_states.reserve(states.size() * 2);
        std::uint64_t retire_mask = 0;
        for (int u : retirees[static_cast<std::size_t>(v)]) {
            retire_mask |= std::uint64_t{1} << u;
        }
        for (auto& [mask, counts] : states) {
            // v matches an earlier unmatched neighbor: one more dimer.
            for (int u : earlier_neighbors[static_cast<std::size_t>(v)]) {
                if (mask & (std::uint64_t{1} << u)) {
                    continue;
                }
                const std::uint64_t matched =
                    (mask | (std::uint64_t{1} << u) | (std::uint64_t{1} << v)) &
                    ~retire_mask;
                Counts shifted(counts.size(), BigInt(0));
                for (std::size_t m = 0; m + 1 < counts.size(); ++m) {
                    if (counts[m] != 0) {
                        shifted[m + 1] = counts[m];
                    }
                }
                merge_into(next_states, matched, std::move(shifted));
            }
            // v stays a monomer.
            merge_into(next_states, mask & ~retire_mask, std::move(counts));
        }
        states = std::move(next_states);
    }

    if (states.size() != 1 || states.begin()->first != 0) {
        throw InternalError("matching enumeration left a dangling frontier");
    }
    MatchCountTable table;
    table.n_sites = n_sites;
    table.counts = std::move(states.begin()->second);
    return table;
}

// Exact growth rate of the monomer-dimer counts in one dimension:
//   (1 - p/2) ln(1 - p/2) - (p/2) ln(p/2) - (1 - p) ln(1 - p),
// the N -> infinity limit of (1/N) ln C(N - pN/2, pN/2).
inline double lambda1_exact(double p) {
    if (p < 0.0 || p > 1.0) {
        throw DomainError("lambda1_exact requires p in [0, 1]");
    }
    return detail::xlogx(1.0 - 0.5 * p) - detail::xlogx(0.5 * p) -
           detail::xlogx(1.0 - p);
}

// Finite-lattice proxy (1/N) ln counts[m] at m = round(p N / 2), ties to
// even.
inline double finite_lambda(const LatticeSpec& spec, double p) {
    if (p < 0.0 || p > 1.0) {
        throw DomainError("finite_lambda requires p in [0, 1]");
    }
    const MatchCountTable table = count_matchings(spec);
    const double target = p * table.n_sites / 2.0;
    const long m = std::lround(std::nearbyint(target));
    if (m < 0 || m >= static_cast<long>(table.counts.size()) ||
        table.counts[static_cast<std::size_t>(m)] == 0) {
        throw DomainError("requested dimer count is outside the count table");
    }
    const double ln_count =
        std::log(table.counts[static_cast<std::size_t>(m)].convert_to<double>());
    return ln_count / static_cast<double>(table.n_sites);
}

struct OracleRow {
    double p = 0.0;
    double series = 0.0;
    double finite = 0.0;
    double abs_diff = 0.0;
    std::optional<double> exact_1d;
    std::optional<double> exact_diff;
};

// Side-by-side comparison of the numeric series evaluation against the
// finite-lattice counts (and against the closed form when d = 1).
inline std::vector<OracleRow> compare_series_oracle(
    const KernelTable& table, const LatticeSpec& spec,
    const std::vector<double>& p_list, double tol = kDefaultNumericTol) {
    std::vector<OracleRow> rows;
    rows.reserve(p_list.size());
    for (double p : p_list) {
        OracleRow row;
        row.p = p;
        row.series = eval_numeric(table, p, spec.dimension, tol);
        row.finite = finite_lambda(spec, p);
        row.abs_diff = std::fabs(row.series - row.finite);
        if (spec.dimension == 1) {
            row.exact_1d = lambda1_exact(p);
            row.exact_diff = std::fabs(row.series - *row.exact_1d);
        }
        rows.push_back(row);
    }
    return rows;
}

} // namespace mdexp
