#include "pano/assignment.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace pano {

std::vector<int> max_score_assignment(const ScoreMatrix& scores)
{
    if (scores.rows < 0 || scores.cols < 0 ||
        scores.values.size() != static_cast<std::size_t>(scores.rows) * static_cast<std::size_t>(scores.cols)) {
        throw std::invalid_argument("score matrix size mismatch");
    }
    std::vector<int> result(static_cast<std::size_t>(scores.rows), -1);
    if (scores.rows == 0 || scores.cols == 0) {
        return result;
    }

    // Square cost matrix: pad with zero-score dummies, minimize (max - score).
    const int n = std::max(scores.rows, scores.cols);
    double top = 0.0;
    for (double v : scores.values) {
        top = std::max(top, v);
    }
    auto cost = [&](int r, int c) {
        const double s = (r < scores.rows && c < scores.cols) ? scores(r, c) : 0.0;
        return top - s;
    };

    const double inf = std::numeric_limits<double>::infinity();
    // 1-based potentials; p[j] is the row matched to column j
    std::vector<double> u(static_cast<std::size_t>(n) + 1, 0.0);
    std::vector<double> v(static_cast<std::size_t>(n) + 1, 0.0);
    std::vector<int> p(static_cast<std::size_t>(n) + 1, 0);
    std::vector<int> way(static_cast<std::size_t>(n) + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(static_cast<std::size_t>(n) + 1, inf);
        std::vector<char> used(static_cast<std::size_t>(n) + 1, 0);
        do {
            used[static_cast<std::size_t>(j0)] = 1;
            const int i0 = p[static_cast<std::size_t>(j0)];
            double delta = inf;
            int j1 = 0;
            for (int j = 1; j <= n; ++j) {
                if (used[static_cast<std::size_t>(j)]) {
                    continue;
                }
                const double cur = cost(i0 - 1, j - 1) - u[static_cast<std::size_t>(i0)] - v[static_cast<std::size_t>(j)];
                if (cur < minv[static_cast<std::size_t>(j)]) {
                    minv[static_cast<std::size_t>(j)] = cur;
                    way[static_cast<std::size_t>(j)] = j0;
                }
                if (minv[static_cast<std::size_t>(j)] < delta) {
                    delta = minv[static_cast<std::size_t>(j)];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[static_cast<std::size_t>(j)]) {
                    u[static_cast<std::size_t>(p[static_cast<std::size_t>(j)])] += delta;
                    v[static_cast<std::size_t>(j)] -= delta;
                } else {
                    minv[static_cast<std::size_t>(j)] -= delta;
                }
            }
            j0 = j1;
        } while (p[static_cast<std::size_t>(j0)] != 0);
        do {
            const int j1 = way[static_cast<std::size_t>(j0)];
            p[static_cast<std::size_t>(j0)] = p[static_cast<std::size_t>(j1)];
            j0 = j1;
        } while (j0 != 0);
    }

    for (int j = 1; j <= n; ++j) {
        const int row = p[static_cast<std::size_t>(j)] - 1;
        if (row >= 0 && row < scores.rows && j - 1 < scores.cols) {
            result[static_cast<std::size_t>(row)] = j - 1;
        }
    }
    return result;
}

} // namespace pano
