#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace ctxattn::nn {

/// Dense row-major matrix of doubles. Vectors are stored as (n x 1).
class Tensor2 {
public:
    Tensor2() = default;
    Tensor2(std::size_t rows, std::size_t cols, double fill = 0.0);
    Tensor2(std::size_t rows, std::size_t cols, std::vector<double> data);

    /// Builds a matrix from nested rows; all rows must have the same length.
    static Tensor2 from_rows(std::initializer_list<std::initializer_list<double>> rows);
    static Tensor2 column(std::span<const double> values);
    static Tensor2 identity(std::size_t n);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
    double& operator[](std::size_t i) { return data_[i]; }
    double operator[](std::size_t i) const { return data_[i]; }

    std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

    std::span<double> values() noexcept { return data_; }
    std::span<const double> values() const noexcept { return data_; }
    const std::vector<double>& data() const noexcept { return data_; }

    void fill(double value);
    bool same_shape(const Tensor2& other) const noexcept {
        return rows_ == other.rows_ && cols_ == other.cols_;
    }
    bool all_finite() const noexcept;

    /// "(rows x cols)", used in error messages.
    std::string shape_string() const;

    friend bool operator==(const Tensor2&, const Tensor2&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

Tensor2 matmul(const Tensor2& a, const Tensor2& b);
Tensor2 tanh_map(const Tensor2& x);
Tensor2 sigmoid_map(const Tensor2& x);

// Span-level kernels used by the recurrent layers. Callers guarantee sizes.

/// out = W * x + bias (bias may be empty).
void affine(const Tensor2& w, std::span<const double> x, std::span<const double> bias, std::span<double> out);
/// out += W * x
void matvec_add(const Tensor2& w, std::span<const double> x, std::span<double> out);
/// out += W^T * y
void matvec_transposed_add(const Tensor2& w, std::span<const double> y, std::span<double> out);
/// grad += y * x^T
void outer_add(std::span<const double> y, std::span<const double> x, Tensor2& grad);

double dot(std::span<const double> a, std::span<const double> b);
double sigmoid(double x);

}  // namespace ctxattn::nn
