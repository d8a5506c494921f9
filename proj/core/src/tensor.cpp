#include "ctxattn/tensor.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "ctxattn/errors.hpp"

namespace ctxattn::nn {

Tensor2::Tensor2(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Tensor2::Tensor2(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows * cols) {
        throw DimensionError(fmt::format("tensor data length {} does not match shape ({} x {})",
                                         data_.size(), rows, cols));
    }
}

Tensor2 Tensor2::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r ? rows.begin()->size() : 0;
    std::vector<double> data;
    data.reserve(r * c);
    for (const auto& row : rows) {
        if (row.size() != c) throw DimensionError("ragged rows in Tensor2::from_rows");
        data.insert(data.end(), row.begin(), row.end());
    }
    return {r, c, std::move(data)};
}

Tensor2 Tensor2::column(std::span<const double> values) {
    return {values.size(), 1, std::vector<double>(values.begin(), values.end())};
}

Tensor2 Tensor2::identity(std::size_t n) {
    Tensor2 t(n, n);
    for (std::size_t i = 0; i < n; ++i) t(i, i) = 1.0;
    return t;
}

void Tensor2::fill(double value) { std::fill(data_.begin(), data_.end(), value); }

bool Tensor2::all_finite() const noexcept {
    return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

std::string Tensor2::shape_string() const { return fmt::format("({} x {})", rows_, cols_); }

Tensor2 matmul(const Tensor2& a, const Tensor2& b) {
    if (a.cols() != b.rows()) {
        throw DimensionError("matmul shape mismatch: " + a.shape_string() + " * " + b.shape_string());
    }
    Tensor2 out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        auto out_row = out.row(i);
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            auto b_row = b.row(k);
            for (std::size_t j = 0; j < b.cols(); ++j) out_row[j] += aik * b_row[j];
        }
    }
    return out;
}

double sigmoid(double x) {
    // Branch keeps exp() from overflowing for large negative inputs.
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

Tensor2 tanh_map(const Tensor2& x) {
    Tensor2 out = x;
    for (auto& v : out.values()) v = std::tanh(v);
    return out;
}

Tensor2 sigmoid_map(const Tensor2& x) {
    Tensor2 out = x;
    for (auto& v : out.values()) v = sigmoid(v);
    return out;
}

void affine(const Tensor2& w, std::span<const double> x, std::span<const double> bias, std::span<double> out) {
    for (std::size_t r = 0; r < w.rows(); ++r) {
        out[r] = (bias.empty() ? 0.0 : bias[r]) + dot(w.row(r), x);
    }
}

void matvec_add(const Tensor2& w, std::span<const double> x, std::span<double> out) {
    for (std::size_t r = 0; r < w.rows(); ++r) out[r] += dot(w.row(r), x);
}

void matvec_transposed_add(const Tensor2& w, std::span<const double> y, std::span<double> out) {
    for (std::size_t r = 0; r < w.rows(); ++r) {
        const double yr = y[r];
        if (yr == 0.0) continue;
        auto row = w.row(r);
        for (std::size_t c = 0; c < w.cols(); ++c) out[c] += yr * row[c];
    }
}

void outer_add(std::span<const double> y, std::span<const double> x, Tensor2& grad) {
    for (std::size_t r = 0; r < y.size(); ++r) {
        const double yr = y[r];
        if (yr == 0.0) continue;
        auto row = grad.row(r);
        for (std::size_t c = 0; c < x.size(); ++c) row[c] += yr * x[c];
    }
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace ctxattn::nn
