#pragma once

namespace eie {

/// Kernel execution policy. `serial` is the reference path used by tests and
/// the benchmark; `parallel` distributes independent work over OpenMP threads.
/// Both paths perform the same per-item arithmetic in the same order, so
/// results agree bitwise.
enum class Execution { serial, parallel };

} // namespace eie
