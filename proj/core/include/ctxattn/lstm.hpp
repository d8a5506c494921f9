#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ctxattn/tensor.hpp"

namespace ctxattn::model {

/// Read-only view of one LSTM cell's weights. Gate blocks are stacked in
/// the order [input, forget, cell, output], each `hidden` rows tall.
struct LstmCellRef {
    const nn::Tensor2& input_weights;      ///< 4H x input_dim
    const nn::Tensor2& recurrent_weights;  ///< 4H x H
    const nn::Tensor2& bias;               ///< 4H x 1

    std::size_t hidden() const noexcept { return recurrent_weights.cols(); }
    std::size_t input_dim() const noexcept { return input_weights.cols(); }
    /// Throws DimensionError unless the three shapes agree.
    void validate() const;
};

/// Gradient buffers matching an LstmCellRef; backward passes accumulate into them.
struct LstmCellGrads {
    nn::Tensor2& input_weights;
    nn::Tensor2& recurrent_weights;
    nn::Tensor2& bias;
};

/// Owning cell parameters, for standalone use.
struct LstmCellParams {
    nn::Tensor2 input_weights;
    nn::Tensor2 recurrent_weights;
    nn::Tensor2 bias;

    static LstmCellParams zeros(std::size_t input_dim, std::size_t hidden);
    LstmCellRef ref() const { return {input_weights, recurrent_weights, bias}; }
};

struct LstmStepCache {
    std::vector<double> x, h_prev, c_prev;
    std::vector<double> input_gate, forget_gate, candidate, output_gate;
    std::vector<double> c, tanh_c;
};

struct LstmStep {
    std::vector<double> h;
    std::vector<double> c;
    LstmStepCache cache;
};

/// i, f, o = sigmoid, g = tanh of the four affine blocks W x + U h_prev + b;
/// c = f * c_prev + i * g; h = o * tanh(c).
LstmStep lstm_cell_forward(std::span<const double> x, std::span<const double> h_prev,
                           std::span<const double> c_prev, const LstmCellRef& cell);

/// Reverse of one step. Accumulates weight gradients into `grads` and writes
/// (overwrites) dL/dx, dL/dh_prev, dL/dc_prev.
void lstm_cell_backward(const LstmStepCache& cache, std::span<const double> grad_h, std::span<const double> grad_c,
                        const LstmCellRef& cell, const LstmCellGrads& grads, std::span<double> grad_x,
                        std::span<double> grad_h_prev, std::span<double> grad_c_prev);

/// Step caches of one direction, in processing order.
struct DirectionCache {
    std::vector<LstmStepCache> steps;
};

struct BiLstmCache {
    DirectionCache forward;
    DirectionCache backward;  ///< steps[0] is position T-1
};

struct BiLstmResult {
    nn::Tensor2 annotations;  ///< T x 2H: forward state then backward state per position
    BiLstmCache cache;
};

/// Runs `fwd` over x_1..x_T and `bwd` over x_T..x_1 from zero states and
/// concatenates their hidden states per position. Throws ArgumentError when
/// T = 0.
BiLstmResult bilstm_forward(const nn::Tensor2& inputs, const LstmCellRef& fwd, const LstmCellRef& bwd);

/// Backpropagation through time for both directions. Returns dL/dinputs.
nn::Tensor2 bilstm_backward(const BiLstmCache& cache, const nn::Tensor2& grad_annotations, const LstmCellRef& fwd,
                            const LstmCellRef& bwd, const LstmCellGrads& fwd_grads,
                            const LstmCellGrads& bwd_grads);

}  // namespace ctxattn::model
