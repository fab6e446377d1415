#pragma once

#include <vector>

namespace pano {

/// Row-major score matrix, rows x cols; rows may differ from cols.
struct ScoreMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> values;

    ScoreMatrix() = default;
    ScoreMatrix(int r, int c, double fill = 0.0) : rows(r), cols(c), values(static_cast<std::size_t>(r) * c, fill) {}

    double& operator()(int r, int c) { return values[static_cast<std::size_t>(r) * cols + c]; }
    double operator()(int r, int c) const { return values[static_cast<std::size_t>(r) * cols + c]; }
};

/// Maximum-total-score one-to-one assignment (Kuhn-Munkres, O(n^3)).
/// Returns, for each row, the assigned column or -1.
std::vector<int> max_score_assignment(const ScoreMatrix& scores);

} // namespace pano
