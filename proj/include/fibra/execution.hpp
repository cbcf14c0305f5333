#pragma once

namespace fibra {

/// Enumeration kernels come in two flavours. `serial` is the reference
/// implementation; `parallel` splits the outer loop across OpenMP threads
/// and must produce identical output.
enum class ExecPolicy { serial, parallel };

}  // namespace fibra
