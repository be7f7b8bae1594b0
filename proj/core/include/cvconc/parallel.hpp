#ifndef CVCONC_PARALLEL_HPP
#define CVCONC_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace cvconc {

/// Worker cap for grid evaluations. Zero means one worker per hardware thread.
struct Parallelism {
  unsigned threads = 0;

  unsigned resolved() const;
};

/// Calls body(i) for every i in [0, count). Each index is visited exactly once; the
/// order across workers is unspecified, so body must only write to slot i.
/// The first exception thrown by any worker is rethrown after all workers join.
void parallel_for(std::size_t count, const Parallelism& par,
                  const std::function<void(std::size_t)>& body);

}  // namespace cvconc

#endif  // CVCONC_PARALLEL_HPP
