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

#ifndef PRIVGP_SAMPLING_H_
#define PRIVGP_SAMPLING_H_

#include <cstdint>

#include <Eigen/Dense>

#include "absl/status/statusor.h"
#include "privgp/linalg.h"

namespace privgp {

// SplitMix64 (Steele, Lea and Flood): a 64-bit counter advanced by the golden
// gamma 0x9e3779b97f4a7c15 and passed through a fixed mixing function. Fully
// specified, so streams are reproducible across implementations.
class SplitMix64 {
 public:
  explicit SplitMix64(uint64_t seed) : state_(seed) {}

  uint64_t Next();
  // Uniform on (0, 1]: ((Next() >> 11) + 1) * 2^-53.
  double NextUniform();
  // Independent generator seeded from this stream.
  SplitMix64 Split() { return SplitMix64(Next()); }

 private:
  uint64_t state_;
};

// Standard normal variates by the Box-Muller transform. Each pair of uniforms
// (u1, u2) yields sqrt(-2 ln u1) cos(2 pi u2) followed by
// sqrt(-2 ln u1) sin(2 pi u2).
class BoxMuller {
 public:
  explicit BoxMuller(uint64_t seed) : uniform_(seed) {}
  double Next();

 private:
  SplitMix64 uniform_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

struct NoiseDraw {
  Eigen::VectorXd z;
  uint64_t seed = 0;
  uint64_t sigma_fingerprint = 0;
};

// FNV-1a over the order and the IEEE-754 bytes of every entry.
uint64_t Fingerprint(const SymMatrix& sigma);

// Draws Z ~ N(0, Sigma) as Z = O^T (sqrt(lambda_i^+) w_i)_i from the spectral
// decomposition Sigma = O^T diag(lambda) O. One standard normal w_i is
// consumed per eigenvalue in descending order, including clipped ones, so a
// seed maps to the same stream however many eigenvalues are clipped.
// Eigenvalues at or below ClipTolerance contribute exactly zero.
class NoiseSampler {
 public:
  // Fails with NotPSD if min eigenvalue < -1e-6 * ||sigma||_max.
  static absl::StatusOr<NoiseSampler> Create(const SymMatrix& sigma);

  NoiseDraw Draw(uint64_t seed) const;
  const SpectralDecomposition& decomposition() const { return decomposition_; }

 private:
  NoiseSampler(SpectralDecomposition decomposition, uint64_t fingerprint);

  SpectralDecomposition decomposition_;
  Eigen::VectorXd scales_;
  uint64_t fingerprint_;
};

absl::StatusOr<NoiseDraw> SampleNoise(const SymMatrix& sigma, uint64_t seed);

// W = Y + Z.
absl::StatusOr<Eigen::VectorXd> Obfuscate(const Eigen::VectorXd& y,
                                          const NoiseDraw& draw);

}  // namespace privgp

#endif  // PRIVGP_SAMPLING_H_
