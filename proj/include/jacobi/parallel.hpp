#pragma once

#include <cstddef>
#include <functional>

namespace jacobi {

// JACOBI_SPECTRA_THREADS caps the worker count; default is hardware concurrency
unsigned worker_count();

// runs body(i) for i in [0, n); each index must write only its own output slot
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace jacobi
