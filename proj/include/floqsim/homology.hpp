#pragma once
#include "floqsim/bits.hpp"
#include "floqsim/f2.hpp"
#include "floqsim/tiling.hpp"
#include <vector>

namespace floqsim {

// F2 cycle space machinery over edge-indicator bitmasks.
struct Homology {
    const Tiling* t;
    Echelon bound;          // face-boundary span
    Echelon coord;          // boundaries (aug 0) + h1 reps (aug e_i)
    std::vector<Bits> h1;   // fundamental cycles independent mod boundaries
    std::vector<std::pair<int, int>> par; // BFS parent (vertex, edge); root {-1,-1}

    explicit Homology(const Tiling& tiling);

    Bits face_boundary(int f) const;
    Bits tree_path(int a, int b) const;
    bool is_cycle(const Bits& m) const;
    Bits klass(const Bits& m) const; // coordinates over h1; throws if not a cycle
    int rank_h1() const { return int(h1.size()); }
    Bits shorten(Bits m) const; // greedy weight reduction by face boundaries
};

// decompose an even-degree edge set into closed vertex walks
std::vector<std::vector<int>> cycle_components(const Tiling& t, const Bits& m);

// transversal crossing parity of two cycles (Z2 intersection form)
int intersection(const Tiling& t, const Bits& ma, const Bits& mb);

struct HomologyBasis {
    std::vector<Bits> loops;                          // edge masks, one per class
    std::vector<std::vector<std::vector<int>>> walks; // closed walks per loop
    std::vector<std::vector<uint8_t>> J;              // crossing parity matrix
};

// 2g shortened independent non-contractible cycles with nonsingular J
HomologyBasis homology_basis(const Tiling& t);

// Closed strings through the color-c skeleton (c-faces as nodes, c-edges as
// links): hop edge list per string plus the lattice cycle it lifts to.
struct StringOp {
    std::vector<int> hop_edges; // color-c edges along the skeleton walk
    Bits lifted;                // full lattice cycle (hops + face arcs)
};
std::vector<StringOp> skeleton_strings(const Tiling& t, int color);

} // namespace floqsim
