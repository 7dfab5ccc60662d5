#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace slime {

// Dense row-major matrix of doubles, sized for token-embedding work
// (n tokens x d dimensions), not linear algebra at large.
struct matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    matrix() = default;
    matrix(std::size_t r, std::size_t c, double fill = 0.0)
        : rows(r), cols(c), data(r * c, fill) {}

    double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

    bool same_shape(const matrix& other) const {
        return rows == other.rows && cols == other.cols;
    }

    bool all_finite() const {
        for (double v : data)
            if (!std::isfinite(v)) return false;
        return true;
    }
};

}  // namespace slime
