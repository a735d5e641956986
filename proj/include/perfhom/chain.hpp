#pragma once

#include "perfhom/linalg.hpp"

#include <map>
#include <string>

namespace perfhom {

// Chain complex of free Z-modules. boundary[k] is the matrix of
// d_k : C_k -> C_{k-1} acting on coordinate columns, so it has
// cell_counts[k-1] rows and cell_counts[k] columns.
struct ChainComplexZ {
    int n = 0;             // ambient dimension when built from forms, else 0
    std::string group;     // "sl", "gl", or empty for generic complexes
    std::map<int, int> cell_counts;
    std::map<int, IntMat> boundary;
    std::map<int, std::vector<std::string>> labels;

    int count(int k) const {
        auto it = cell_counts.find(k);
        return it == cell_counts.end() ? 0 : it->second;
    }
    int min_degree() const { return cell_counts.empty() ? 0 : cell_counts.begin()->first; }
    int max_degree() const { return cell_counts.empty() ? -1 : cell_counts.rbegin()->first; }

    IntMat boundary_or_zero(int k) const {
        auto it = boundary.find(k);
        if (it != boundary.end()) return it->second;
        return IntMat(count(k - 1), count(k));
    }

    // Structural consistency: matrix shapes match the cell counts.
    void validate() const;
    // d_k . d_{k+1} = 0 for all degrees.
    bool boundary_squares_to_zero() const;
};

} // namespace perfhom
