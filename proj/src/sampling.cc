//
// Copyright 2026 The PrivGP Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "privgp/sampling.h"

#include <cmath>
#include <cstring>
#include <numbers>
#include <utility>

#include "absl/strings/str_cat.h"
#include "privgp/status.h"

namespace privgp {

uint64_t SplitMix64::Next() {
  uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double SplitMix64::NextUniform() {
  return static_cast<double>((Next() >> 11) + 1) * 0x1.0p-53;
}

double BoxMuller::Next() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = uniform_.NextUniform();
  const double u2 = uniform_.NextUniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

uint64_t Fingerprint(const SymMatrix& sigma) {
  uint64_t hash = 0xcbf29ce484222325ULL;
  auto mix = [&hash](const unsigned char* bytes, size_t size) {
    for (size_t i = 0; i < size; ++i) {
      hash ^= bytes[i];
      hash *= 0x100000001b3ULL;
    }
  };
  const uint64_t order = static_cast<uint64_t>(sigma.order());
  mix(reinterpret_cast<const unsigned char*>(&order), sizeof(order));
  for (int i = 0; i < sigma.order(); ++i) {
    for (int j = 0; j < sigma.order(); ++j) {
      const double value = sigma(i, j);
      mix(reinterpret_cast<const unsigned char*>(&value), sizeof(value));
    }
  }
  return hash;
}

NoiseSampler::NoiseSampler(SpectralDecomposition decomposition,
                           uint64_t fingerprint)
    : decomposition_(std::move(decomposition)), fingerprint_(fingerprint) {
  const Eigen::VectorXd& lambda = decomposition_.eigenvalues;
  const double tau = ClipTolerance(lambda);
  scales_.resize(lambda.size());
  for (int i = 0; i < lambda.size(); ++i) {
    scales_(i) = lambda(i) > tau ? std::sqrt(lambda(i)) : 0.0;
  }
}

absl::StatusOr<NoiseSampler> NoiseSampler::Create(const SymMatrix& sigma) {
  PRIVGP_ASSIGN_OR_RETURN(SpectralDecomposition decomposition, SymEigen(sigma));
  const int n = sigma.order();
  if (n > 0) {
    const double smallest = decomposition.eigenvalues(n - 1);
    if (smallest < -1e-6 * sigma.MaxAbs()) {
      return MakeError(ErrorKind::kNotPsd,
                       absl::StrCat("noise covariance has eigenvalue ",
                                    smallest));
    }
  }
  return NoiseSampler(std::move(decomposition), Fingerprint(sigma));
}

NoiseDraw NoiseSampler::Draw(uint64_t seed) const {
  const int n = static_cast<int>(scales_.size());
  BoxMuller normal(seed);
  Eigen::VectorXd u(n);
  for (int i = 0; i < n; ++i) u(i) = scales_(i) * normal.Next();
  NoiseDraw draw;
  draw.z = decomposition_.basis.transpose() * u;
  draw.seed = seed;
  draw.sigma_fingerprint = fingerprint_;
  return draw;
}

absl::StatusOr<NoiseDraw> SampleNoise(const SymMatrix& sigma, uint64_t seed) {
  PRIVGP_ASSIGN_OR_RETURN(NoiseSampler sampler, NoiseSampler::Create(sigma));
  return sampler.Draw(seed);
}

absl::StatusOr<Eigen::VectorXd> Obfuscate(const Eigen::VectorXd& y,
                                          const NoiseDraw& draw) {
  if (y.size() != draw.z.size()) {
    return MakeError(ErrorKind::kDimensionMismatch,
                     absl::StrCat("responses have length ", y.size(),
                                  ", noise has length ", draw.z.size()));
  }
  return Eigen::VectorXd(y + draw.z);
}

}  // namespace privgp
