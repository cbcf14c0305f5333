#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include "fibra/execution.hpp"

namespace fibra {

struct ContinuitySweepStats {
  std::size_t topology_pairs = 0;
  std::size_t correspondences = 0;
  /// (phi, A) pairs with A nonempty.
  std::size_t checked = 0;
  /// Of those, pairs with phi(A) empty, compared through the neighborhood
  /// characterization because the image family is then no filter base.
  std::size_t empty_image = 0;
  std::size_t disagreements = 0;
  std::optional<std::string> first_disagreement;
};

/// Compares continuity on A with "phi(A) is the limit of phi along the
/// neighborhood filter of A" for every topology on `src_points` points,
/// every topology on `dst_points` points, every correspondence between them
/// and every nonempty A.
ContinuitySweepStats continuity_sweep(std::size_t src_points, std::size_t dst_points,
                                      ExecPolicy policy = ExecPolicy::parallel);

}  // namespace fibra
