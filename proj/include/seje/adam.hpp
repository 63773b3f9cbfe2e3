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

#pragma once

#include <cstdint>
#include <vector>

#include "seje/checkpoint.hpp"
#include "seje/nn.hpp"

namespace seje {

struct AdamConfig {
  double learning_rate = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// Adam with bias-corrected moments:
///   m <- b1 m + (1-b1) g,  v <- b2 v + (1-b2) g^2,
///   p <- p - lr * m_hat / (sqrt(v_hat) + eps).
class Adam {
 public:
  Adam() = default;
  Adam(nn::ParamRefs params, AdamConfig config);

  void step();
  void zero_grad() { nn::zero_grads(params_); }

  std::int64_t steps() const { return t_; }
  const AdamConfig& config() const { return config_; }
  const nn::ParamRefs& params() const { return params_; }
  /// Points the optimiser at a structurally identical parameter list, keeping
  /// moments and step count.
  void rebind(nn::ParamRefs params);

  void save_state(Checkpoint& ckpt, const std::string& prefix) const;
  void load_state(const Checkpoint& ckpt, const std::string& prefix);

 private:
  nn::ParamRefs params_;
  AdamConfig config_;
  std::vector<Matrix> m_;
  std::vector<Matrix> v_;
  std::int64_t t_ = 0;
};

}  // namespace seje
