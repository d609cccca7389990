// SPDX-License-Identifier: Apache-2.0
#include "blochnls/fft.hpp"

#include <algorithm>
#include <mutex>

#include <fftw3.h>

#include "blochnls/errors.hpp"

namespace blochnls
{

namespace
{

std::mutex &planner_mutex()
{
  static std::mutex m;
  return m;
}

fftw_complex *as_fftw(cplx *p)
{
  return reinterpret_cast<fftw_complex *>(p);
}

}  // namespace

struct Fft::Plans
{
  CVector scratch;
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;

  ~Plans()
  {
    std::lock_guard lock(planner_mutex());
    if (fwd != nullptr)
    {
      fftw_destroy_plan(fwd);
    }
    if (bwd != nullptr)
    {
      fftw_destroy_plan(bwd);
    }
  }
};

Fft::Fft(Shape shape, FftPlanning planning) : shape_(std::move(shape)), plans_(std::make_unique<Plans>())
{
  plans_->scratch.assign(shape_.size(), cplx{});
  const unsigned flags = planning == FftPlanning::Measure ? FFTW_MEASURE : FFTW_ESTIMATE;
  std::lock_guard lock(planner_mutex());
  auto *buf = as_fftw(plans_->scratch.data());
  plans_->fwd = fftw_plan_dft(shape_.rank(), shape_.extents().data(), buf, buf, FFTW_FORWARD, flags);
  plans_->bwd = fftw_plan_dft(shape_.rank(), shape_.extents().data(), buf, buf, FFTW_BACKWARD, flags);
  // Measuring overwrites the buffer.
  std::fill(plans_->scratch.begin(), plans_->scratch.end(), cplx{});
  if (plans_->fwd == nullptr || plans_->bwd == nullptr)
  {
    throw NumericalError("FFTW failed to create a plan");
  }
}

Fft::~Fft() = default;
Fft::Fft(Fft &&) noexcept = default;
Fft &Fft::operator=(Fft &&) noexcept = default;

void Fft::forward(std::span<cplx> data) const
{
  execute(true, data);
}

void Fft::backward(std::span<cplx> data) const
{
  execute(false, data);
}

void Fft::execute(bool forward, std::span<cplx> data) const
{
  if (data.size() != shape_.size())
  {
    throw ShapeError("FFT input does not match the planned shape");
  }
  fftw_plan plan = forward ? plans_->fwd : plans_->bwd;
  auto *scratch = reinterpret_cast<double *>(plans_->scratch.data());
  auto *target = reinterpret_cast<double *>(data.data());
  if (fftw_alignment_of(target) == fftw_alignment_of(scratch))
  {
    fftw_execute_dft(plan, as_fftw(data.data()), as_fftw(data.data()));
    return;
  }
  // Misaligned caller buffer: go through a private copy.
  CVector tmp(data.begin(), data.end());
  fftw_execute_dft(plan, as_fftw(tmp.data()), as_fftw(tmp.data()));
  std::copy(tmp.begin(), tmp.end(), data.begin());
}

}  // namespace blochnls
