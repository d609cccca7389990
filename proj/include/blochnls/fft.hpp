// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <span>

#include "blochnls/lattice.hpp"

namespace blochnls
{

/// In-place multidimensional complex DFT on a fixed shape (FFTW backed).
///
/// forward:  X[q] = sum_n x[n] exp(-2 pi i q.n / N)
/// backward: x[n] = sum_q X[q] exp(+2 pi i q.n / N)   (unnormalized)
///
/// Estimate plans (the default) are bit-reproducible run to run. Measure plans
/// time candidate algorithms, run about twice as fast on large 2D boxes, and may
/// pick different algorithms (hence different rounding) on different runs.
/// Executing one Fft object from several threads at once is safe; planning is
/// serialized internally.
enum class FftPlanning
{
  Estimate,
  Measure,
};

class Fft
{
public:
  explicit Fft(Shape shape, FftPlanning planning = FftPlanning::Estimate);
  ~Fft();
  Fft(Fft &&) noexcept;
  Fft &operator=(Fft &&) noexcept;
  Fft(const Fft &) = delete;
  Fft &operator=(const Fft &) = delete;

  const Shape &shape() const { return shape_; }

  void forward(std::span<cplx> data) const;
  void backward(std::span<cplx> data) const;

private:
  struct Plans;
  void execute(bool forward, std::span<cplx> data) const;

  Shape shape_;
  std::unique_ptr<Plans> plans_;
};

}  // namespace blochnls
