#pragma once

#include <cstddef>
#include <memory>
#include <type_traits>

namespace specal {

/// Worker count actually used for a request of `jobs` (0 = all available).
int resolve_jobs(int jobs);

/// Runs fn(i) for i in [0, count) across `jobs` OpenMP threads with dynamic
/// scheduling. Tasks must write disjoint outputs; under that contract the
/// result is identical for every worker count, including the serial path.
/// jobs <= 1 executes a plain loop.
void parallel_for(std::size_t count, int jobs, void (*fn)(std::size_t, void*), void* ctx);

template <typename Fn>
void parallel_for(std::size_t count, int jobs, Fn&& fn) {
    using F = std::remove_reference_t<Fn>;
    auto thunk = [](std::size_t i, void* ctx) { (*static_cast<F*>(ctx))(i); };
    parallel_for(count, jobs, +thunk, std::addressof(fn));
}

}  // namespace specal
