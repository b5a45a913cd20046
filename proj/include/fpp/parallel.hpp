#pragma once

#include <cstddef>
#include <exception>
#include <optional>
#include <string>
#include <vector>

#include <omp.h>

namespace fpp {

struct RunOptions {
  int threads = 0;        // 0: OpenMP default
  bool parallel = true;   // false: the serial reference loop
};

// Cell outcome; failed cells keep the exception text and the run continues.
template <class T>
struct CellResult {
  std::optional<T> value;
  std::string error;
};

// Evaluates cell(i) for i in [0, count). Results are stored by index, so the
// output does not depend on scheduling or thread count as long as each cell
// draws only from its own counter-based stream.
template <class T, class F>
std::vector<CellResult<T>> replicate(std::size_t count, F&& cell, const RunOptions& opts = {}) {
  std::vector<CellResult<T>> out(count);
  auto run_one = [&](std::size_t i) {
    try {
      out[i].value = cell(i);
    } catch (const std::exception& e) {
      out[i].error = e.what();
    } catch (...) {
      out[i].error = "unknown failure";
    }
  };
  if (!opts.parallel || count < 2) {
    for (std::size_t i = 0; i < count; ++i) run_one(i);
    return out;
  }
  const int threads = opts.threads > 0 ? opts.threads : omp_get_max_threads();
  const auto n = static_cast<long long>(count);
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (long long i = 0; i < n; ++i) run_one(static_cast<std::size_t>(i));
  return out;
}

// Values of the successful cells in index order; `failed` counts the rest.
template <class T>
std::vector<T> successful(const std::vector<CellResult<T>>& cells, std::size_t* failed = nullptr) {
  std::vector<T> v;
  v.reserve(cells.size());
  std::size_t bad = 0;
  for (const auto& c : cells) {
    if (c.value)
      v.push_back(*c.value);
    else
      ++bad;
  }
  if (failed) *failed = bad;
  return v;
}

}  // namespace fpp
