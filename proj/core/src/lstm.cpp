#include "ctxattn/lstm.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "ctxattn/errors.hpp"

namespace ctxattn::model {

using nn::Tensor2;

void LstmCellRef::validate() const {
    const std::size_t h = hidden();
    if (input_weights.rows() != 4 * h || recurrent_weights.rows() != 4 * h || bias.rows() != 4 * h ||
        bias.cols() != 1 || h == 0) {
        throw DimensionError(fmt::format("inconsistent LSTM cell shapes: W {}, U {}, b {}",
                                         input_weights.shape_string(), recurrent_weights.shape_string(),
                                         bias.shape_string()));
    }
}

LstmCellParams LstmCellParams::zeros(std::size_t input_dim, std::size_t hidden) {
    return {Tensor2(4 * hidden, input_dim), Tensor2(4 * hidden, hidden), Tensor2(4 * hidden, 1)};
}

LstmStep lstm_cell_forward(std::span<const double> x, std::span<const double> h_prev,
                           std::span<const double> c_prev, const LstmCellRef& cell) {
    cell.validate();
    const std::size_t h = cell.hidden();
    if (x.size() != cell.input_dim() || h_prev.size() != h || c_prev.size() != h) {
        throw DimensionError(fmt::format("LSTM step inputs x={}, h={}, c={} do not fit cell (input {}, hidden {})",
                                         x.size(), h_prev.size(), c_prev.size(), cell.input_dim(), h));
    }

    std::vector<double> z(4 * h);
    nn::affine(cell.input_weights, x, cell.bias.values(), z);
    nn::matvec_add(cell.recurrent_weights, h_prev, z);

    LstmStep step;
    auto& k = step.cache;
    k.x.assign(x.begin(), x.end());
    k.h_prev.assign(h_prev.begin(), h_prev.end());
    k.c_prev.assign(c_prev.begin(), c_prev.end());
    k.input_gate.resize(h);
    k.forget_gate.resize(h);
    k.candidate.resize(h);
    k.output_gate.resize(h);
    k.c.resize(h);
    k.tanh_c.resize(h);
    step.h.resize(h);

    for (std::size_t j = 0; j < h; ++j) {
        k.input_gate[j] = nn::sigmoid(z[j]);
        k.forget_gate[j] = nn::sigmoid(z[h + j]);
        k.candidate[j] = std::tanh(z[2 * h + j]);
        k.output_gate[j] = nn::sigmoid(z[3 * h + j]);
        k.c[j] = k.forget_gate[j] * c_prev[j] + k.input_gate[j] * k.candidate[j];
        k.tanh_c[j] = std::tanh(k.c[j]);
        step.h[j] = k.output_gate[j] * k.tanh_c[j];
    }
    step.c = k.c;
    return step;
}

void lstm_cell_backward(const LstmStepCache& k, std::span<const double> grad_h, std::span<const double> grad_c,
                        const LstmCellRef& cell, const LstmCellGrads& grads, std::span<double> grad_x,
                        std::span<double> grad_h_prev, std::span<double> grad_c_prev) {
    const std::size_t h = cell.hidden();
    std::vector<double> dz(4 * h);
    for (std::size_t j = 0; j < h; ++j) {
        const double i = k.input_gate[j], f = k.forget_gate[j], g = k.candidate[j], o = k.output_gate[j];
        const double dc = grad_c[j] + grad_h[j] * o * (1.0 - k.tanh_c[j] * k.tanh_c[j]);
        const double d_o = grad_h[j] * k.tanh_c[j];
        dz[j] = dc * g * i * (1.0 - i);
        dz[h + j] = dc * k.c_prev[j] * f * (1.0 - f);
        dz[2 * h + j] = dc * i * (1.0 - g * g);
        dz[3 * h + j] = d_o * o * (1.0 - o);
        grad_c_prev[j] = dc * f;
    }

    nn::outer_add(dz, k.x, grads.input_weights);
    nn::outer_add(dz, k.h_prev, grads.recurrent_weights);
    auto db = grads.bias.values();
    for (std::size_t r = 0; r < dz.size(); ++r) db[r] += dz[r];

    std::fill(grad_x.begin(), grad_x.end(), 0.0);
    std::fill(grad_h_prev.begin(), grad_h_prev.end(), 0.0);
    nn::matvec_transposed_add(cell.input_weights, dz, grad_x);
    nn::matvec_transposed_add(cell.recurrent_weights, dz, grad_h_prev);
}

namespace {

void run_direction(const Tensor2& inputs, const LstmCellRef& cell, bool reverse, std::size_t column_offset,
                   Tensor2& annotations, DirectionCache& cache) {
    const std::size_t steps = inputs.rows();
    const std::size_t h = cell.hidden();
    std::vector<double> state_h(h, 0.0), state_c(h, 0.0);
    cache.steps.reserve(steps);
    for (std::size_t n = 0; n < steps; ++n) {
        const std::size_t pos = reverse ? steps - 1 - n : n;
        LstmStep step = lstm_cell_forward(inputs.row(pos), state_h, state_c, cell);
        auto out = annotations.row(pos);
        std::copy(step.h.begin(), step.h.end(), out.begin() + static_cast<std::ptrdiff_t>(column_offset));
        state_h = std::move(step.h);
        state_c = std::move(step.c);
        cache.steps.push_back(std::move(step.cache));
    }
}

void reverse_direction(const DirectionCache& cache, const Tensor2& grad_annotations, const LstmCellRef& cell,
                       const LstmCellGrads& grads, bool reverse, std::size_t column_offset, Tensor2& grad_inputs) {
    const std::size_t steps = cache.steps.size();
    const std::size_t h = cell.hidden();
    std::vector<double> carry_h(h, 0.0), carry_c(h, 0.0);
    std::vector<double> dh(h), dx(cell.input_dim()), dh_prev(h), dc_prev(h);
    for (std::size_t n = steps; n-- > 0;) {
        const std::size_t pos = reverse ? steps - 1 - n : n;
        auto upstream = grad_annotations.row(pos);
        for (std::size_t j = 0; j < h; ++j) dh[j] = upstream[column_offset + j] + carry_h[j];
        lstm_cell_backward(cache.steps[n], dh, carry_c, cell, grads, dx, dh_prev, dc_prev);
        auto gx = grad_inputs.row(pos);
        for (std::size_t k = 0; k < dx.size(); ++k) gx[k] += dx[k];
        carry_h.swap(dh_prev);
        carry_c.swap(dc_prev);
    }
}

}  // namespace

BiLstmResult bilstm_forward(const Tensor2& inputs, const LstmCellRef& fwd, const LstmCellRef& bwd) {
    if (inputs.rows() == 0) throw ArgumentError("bilstm_forward needs at least one time step");
    fwd.validate();
    bwd.validate();
    if (fwd.input_dim() != inputs.cols() || bwd.input_dim() != inputs.cols()) {
        throw DimensionError(fmt::format("bilstm inputs {} do not match cell input sizes {} / {}",
                                         inputs.shape_string(), fwd.input_dim(), bwd.input_dim()));
    }
    BiLstmResult result{Tensor2(inputs.rows(), fwd.hidden() + bwd.hidden()), {}};
    run_direction(inputs, fwd, false, 0, result.annotations, result.cache.forward);
    run_direction(inputs, bwd, true, fwd.hidden(), result.annotations, result.cache.backward);
    return result;
}

Tensor2 bilstm_backward(const BiLstmCache& cache, const Tensor2& grad_annotations, const LstmCellRef& fwd,
                        const LstmCellRef& bwd, const LstmCellGrads& fwd_grads, const LstmCellGrads& bwd_grads) {
    const std::size_t steps = cache.forward.steps.size();
    if (cache.backward.steps.size() != steps || grad_annotations.rows() != steps ||
        grad_annotations.cols() != fwd.hidden() + bwd.hidden()) {
        throw StateError("bilstm cache does not match the upstream gradient");
    }
    Tensor2 grad_inputs(steps, fwd.input_dim());
    reverse_direction(cache.forward, grad_annotations, fwd, fwd_grads, false, 0, grad_inputs);
    reverse_direction(cache.backward, grad_annotations, bwd, bwd_grads, true, fwd.hidden(), grad_inputs);
    return grad_inputs;
}

}  // namespace ctxattn::model
