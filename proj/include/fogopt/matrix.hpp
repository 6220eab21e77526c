#ifndef FOGOPT_MATRIX_HPP_
#define FOGOPT_MATRIX_HPP_

#include <cstddef>
#include <cstdint>
#include <vector>

namespace fogopt {

/// Dense row-major matrix of doubles. Just enough linear algebra for the
/// allocation/dual matrices used here; heavier deps are not warranted.
class Mat {
 public:
    Mat() = default;
    Mat(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), d_(rows * cols, fill) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t r, std::size_t c) { return d_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return d_[r * cols_ + c]; }

    double* data() { return d_.data(); }
    const double* data() const { return d_.data(); }
    std::size_t size() const { return d_.size(); }

    bool operator==(const Mat&) const = default;

 private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<double> d_;
};

class BoolMat {
 public:
    BoolMat() = default;
    BoolMat(std::size_t rows, std::size_t cols, bool fill = false)
        : rows_(rows), cols_(cols), d_(rows * cols, fill ? 1 : 0) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    void set(std::size_t r, std::size_t c, bool v) { d_[r * cols_ + c] = v ? 1 : 0; }
    bool operator()(std::size_t r, std::size_t c) const { return d_[r * cols_ + c] != 0; }

    bool operator==(const BoolMat&) const = default;

 private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<std::uint8_t> d_;
};

}  // namespace fogopt

#endif  // FOGOPT_MATRIX_HPP_
