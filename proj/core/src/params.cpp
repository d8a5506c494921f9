#include "ctxattn/params.hpp"

#include "ctxattn/errors.hpp"

namespace ctxattn::nn {

Param& ParamStore::add(std::string name, Tensor2 value) {
    if (index_.contains(name)) throw ArgumentError("duplicate parameter name: " + name);
    index_.emplace(name, params_.size());
    Tensor2 grad(value.rows(), value.cols());
    params_.push_back(Param{std::move(name), std::move(value), std::move(grad)});
    return params_.back();
}

bool ParamStore::contains(std::string_view name) const { return index_.contains(std::string(name)); }

Param& ParamStore::at(std::string_view name) {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) throw ArgumentError("unknown parameter: " + std::string(name));
    return params_[it->second];
}

const Param& ParamStore::at(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) throw ArgumentError("unknown parameter: " + std::string(name));
    return params_[it->second];
}

std::size_t ParamStore::scalar_count() const noexcept {
    std::size_t n = 0;
    for (const auto& p : params_) n += p.value.size();
    return n;
}

void ParamStore::zero_grad() {
    for (auto& p : params_) p.grad.fill(0.0);
}

void ParamStore::scale_grad(double factor) {
    for (auto& p : params_) {
        for (auto& g : p.grad.values()) g *= factor;
    }
}

}  // namespace ctxattn::nn
