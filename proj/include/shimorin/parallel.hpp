#ifndef SHIMORIN_PARALLEL_HPP
#define SHIMORIN_PARALLEL_HPP

#include <atomic>
#include <cstddef>
#include <utility>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

// Deterministic data-parallel helpers.  Every parallel loop writes each index
// into its own slot; reductions are then done serially in index order, so the
// OpenMP path is bit-identical to the serial reference for any thread count.
namespace shimorin::par {

inline constexpr std::size_t kGrain = 64;  // below this, threading never pays

inline bool compiled_with_openmp() {
#ifdef _OPENMP
  return true;
#else
  return false;
#endif
}

inline std::atomic<bool>& enabled_flag() {
  static std::atomic<bool> flag{true};
  return flag;
}

inline bool enabled() { return compiled_with_openmp() && enabled_flag().load(); }
inline void set_enabled(bool on) { enabled_flag().store(on); }

inline int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

/// Serial reference loop, kept as its own entry point for tests and bench.
template <class F>
void for_each_index_serial(std::size_t n, F&& body) {
  for (std::size_t i = 0; i < n; ++i) body(i);
}

/// OpenMP loop; body(i) must only touch state owned by index i.
template <class F>
void for_each_index_openmp(std::size_t n, F&& body) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < static_cast<long long>(n); ++i)
    body(static_cast<std::size_t>(i));
#else
  for_each_index_serial(n, std::forward<F>(body));
#endif
}

template <class F>
void for_each_index(std::size_t n, F&& body) {
  if (enabled() && n >= kGrain)
    for_each_index_openmp(n, std::forward<F>(body));
  else
    for_each_index_serial(n, std::forward<F>(body));
}

template <class T, class F>
std::vector<T> map_indexed_serial(std::size_t n, F&& fn) {
  std::vector<T> out(n);
  for_each_index_serial(n, [&](std::size_t i) { out[i] = fn(i); });
  return out;
}

template <class T, class F>
std::vector<T> map_indexed_openmp(std::size_t n, F&& fn) {
  std::vector<T> out(n);
  for_each_index_openmp(n, [&](std::size_t i) { out[i] = fn(i); });
  return out;
}

/// Slot-filling map: out[i] = fn(i).  Dispatches on the runtime switch.
template <class T, class F>
std::vector<T> map_indexed(std::size_t n, F&& fn) {
  std::vector<T> out(n);
  for_each_index(n, [&](std::size_t i) { out[i] = fn(i); });
  return out;
}

}  // namespace shimorin::par

#endif
