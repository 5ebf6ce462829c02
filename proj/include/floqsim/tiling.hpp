#pragma once
#include <array>
#include <map>
#include <string>
#include <vector>

namespace floqsim {

// colors are 0=r 1=g 2=b throughout
char color_char(int c);
int color_of_char(char c);

// Trivalent three-colored tiling. Vertices are qubits. Edge color is the one
// color distinct from both incident face colors; each color class must be a
// perfect matching.
struct Tiling {
    int p = 8, q = 3, ell = 1;
    int nv = 0;
    std::vector<std::array<int, 2>> edges; // sorted endpoint pairs
    std::vector<std::vector<int>> faces;   // vertex cycles
    std::vector<int> fcol;

    // derived by finalize()
    std::vector<int> ecol;
    std::vector<std::vector<int>> fedges, v2e, v2f;
    std::vector<std::array<int, 2>> e2f;
    std::vector<std::array<int, 3>> rot; // rotation system, from face traces
    std::map<std::pair<int, int>, int> eidx;

    int ne() const { return int(edges.size()); }
    int nf() const { return int(faces.size()); }
    int edge_index(int a, int b) const;
    int genus() const; // from Euler characteristic

    // builds derived tables; throws std::runtime_error on structural breakage
    void finalize();
};

// g = 1 - |E|(1/p + 1/q - 1/2); throws if the result is negative or fractional
int genus_formula(int p, int q, int num_edges);

// face cycles from a rotation system (next dart of (u,v) follows u in rot[v])
std::vector<std::vector<int>> trace_faces(
    int nv, const std::vector<std::array<int, 2>>& edges,
    const std::vector<std::array<int, 3>>& rot);

// empty report iff every invariant holds
std::vector<std::string> validate_tiling(const Tiling& t);

Tiling base_hcf16();
Tiling refine(const Tiling& t, int ell);

// "hcf16" or a lattice file path; throws on unknown name, parse failure, or
// invariant violations in file data
Tiling build_base_lattice(const std::string& name_or_path);

std::string emit_lattice(const Tiling& t);
Tiling parse_lattice(const std::string& text);

} // namespace floqsim
