// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstddef>
#include <cstdlib>
#include <new>
#include <vector>

namespace blochnls
{

// 64-byte aligned storage so FFTW can run its SIMD kernels on field buffers directly.
template <class T>
struct AlignedAllocator
{
  using value_type = T;
  static constexpr std::size_t alignment = 64;

  AlignedAllocator() noexcept = default;
  template <class U>
  AlignedAllocator(const AlignedAllocator<U> &) noexcept
  {
  }

  T *allocate(std::size_t n)
  {
    const std::size_t bytes = ((n * sizeof(T) + alignment - 1) / alignment) * alignment;
    void *p = std::aligned_alloc(alignment, bytes == 0 ? alignment : bytes);
    if (p == nullptr)
    {
      throw std::bad_alloc();
    }
    return static_cast<T *>(p);
  }
  void deallocate(T *p, std::size_t) noexcept { std::free(p); }

  template <class U>
  bool operator==(const AlignedAllocator<U> &) const noexcept
  {
    return true;
  }
};

using CVector = std::vector<std::complex<double>, AlignedAllocator<std::complex<double>>>;

}  // namespace blochnls
