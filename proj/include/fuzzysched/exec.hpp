#pragma once

namespace fsched {

/// Selects between the OpenMP kernels and their serial reference loops.
/// Both produce identical results; the serial path exists for testing and
/// benchmarking.
enum class Exec { serial, parallel };

}  // namespace fsched
