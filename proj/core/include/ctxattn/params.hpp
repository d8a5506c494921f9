#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ctxattn/tensor.hpp"

namespace ctxattn::nn {

struct Param {
    std::string name;
    Tensor2 value;
    Tensor2 grad;
};

/// Named parameters with gradients of identical shape. Iteration follows
/// insertion order, which is also the serialization order.
class ParamStore {
public:
    /// Adds a parameter; throws ArgumentError when the name is taken.
    Param& add(std::string name, Tensor2 value);

    bool contains(std::string_view name) const;
    Param& at(std::string_view name);
    const Param& at(std::string_view name) const;
    Tensor2& value(std::string_view name) { return at(name).value; }
    const Tensor2& value(std::string_view name) const { return at(name).value; }
    Tensor2& grad(std::string_view name) { return at(name).grad; }
    const Tensor2& grad(std::string_view name) const { return at(name).grad; }

    std::size_t size() const noexcept { return params_.size(); }
    /// Total scalar count across all parameters.
    std::size_t scalar_count() const noexcept;

    void zero_grad();
    void scale_grad(double factor);

    auto begin() noexcept { return params_.begin(); }
    auto end() noexcept { return params_.end(); }
    auto begin() const noexcept { return params_.begin(); }
    auto end() const noexcept { return params_.end(); }

private:
    std::vector<Param> params_;
    std::unordered_map<std::string, std::size_t> index_;
};

}  // namespace ctxattn::nn
