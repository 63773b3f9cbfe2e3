/* Copyright 2026 The SEJE Authors.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "seje/adam.hpp"

#include <cmath>

namespace seje {

Adam::Adam(nn::ParamRefs params, AdamConfig config) : params_(std::move(params)), config_(config) {
  for (const nn::Param* p : params_) {
    m_.push_back(Matrix::Zero(p->value.rows(), p->value.cols()));
    v_.push_back(Matrix::Zero(p->value.rows(), p->value.cols()));
  }
}

void Adam::step() {
  ++t_;
  const double b1 = config_.beta1;
  const double b2 = config_.beta2;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(t_));
  for (std::size_t k = 0; k < params_.size(); ++k) {
    nn::Param& p = *params_[k];
    m_[k] = b1 * m_[k] + (1.0 - b1) * p.grad;
    v_[k] = b2 * v_[k] + (1.0 - b2) * p.grad.cwiseProduct(p.grad);
    p.value.array() -= config_.learning_rate * (m_[k].array() / c1) / ((v_[k].array() / c2).sqrt() + config_.epsilon);
  }
}

void Adam::rebind(nn::ParamRefs params) {
  if (params.size() != params_.size()) throw Error("Adam::rebind: parameter count changed");
  params_ = std::move(params);
}

void Adam::save_state(Checkpoint& ckpt, const std::string& prefix) const {
  Matrix t(1, 1);
  t(0, 0) = static_cast<double>(t_);
  ckpt.put(prefix + "adam.t", t);
  for (std::size_t k = 0; k < params_.size(); ++k) {
    ckpt.put(prefix + "adam.m." + params_[k]->name, m_[k]);
    ckpt.put(prefix + "adam.v." + params_[k]->name, v_[k]);
  }
}

void Adam::load_state(const Checkpoint& ckpt, const std::string& prefix) {
  t_ = static_cast<std::int64_t>(ckpt.get(prefix + "adam.t")(0, 0));
  for (std::size_t k = 0; k < params_.size(); ++k) {
    m_[k] = ckpt.get(prefix + "adam.m." + params_[k]->name);
    v_[k] = ckpt.get(prefix + "adam.v." + params_[k]->name);
  }
}

}  // namespace seje
