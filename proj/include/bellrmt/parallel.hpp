#pragma once

#include <cstddef>
#include <exception>
#include <limits>
#include <mutex>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace bellrmt {

/// Team size for an OpenMP region: `requested` when positive, else the runtime default.
inline int team_size(int requested) {
    if (requested > 0) return requested;
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

/// Keeps the exception from the lowest loop index so parallel loops fail deterministically.
class FirstFailure {
public:
    void capture(std::size_t index) {
        std::lock_guard lock(mutex_);
        if (index < index_) {
            index_ = index;
            error_ = std::current_exception();
        }
    }
    void rethrow_if_any() const {
        if (error_) std::rethrow_exception(error_);
    }

private:
    std::mutex mutex_;
    std::size_t index_ = std::numeric_limits<std::size_t>::max();
    std::exception_ptr error_;
};

}  // namespace bellrmt
