#include "fibra/sweep.hpp"

#include <vector>

#include "fibra/error.hpp"
#include "fibra/relation.hpp"
#include "fibra/topology.hpp"

namespace fibra {

namespace {

FinSet labelled(const char* prefix, std::size_t n) {
  std::vector<Label> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back(prefix + std::to_string(i));
  return FinSet(std::move(labels));
}

struct PairResult {
  std::size_t correspondences = 0;
  std::size_t checked = 0;
  std::size_t empty_image = 0;
  std::size_t disagreements = 0;
  std::optional<std::string> first;
};

PairResult sweep_pair(const FiniteTopology& src, const FiniteTopology& dst) {
  PairResult r;
  const std::size_t n = src.points().size();
  const std::size_t m = dst.points().size();
  const std::size_t bits = n * m;
  const Mask row_mask = full_mask(m);
  for (Mask code = 0; code < (Mask{1} << bits); ++code) {
    std::vector<Mask> rows(n);
    for (std::size_t i = 0; i < n; ++i) rows[i] = (code >> (i * m)) & row_mask;
    const Correspondence phi(src.points(), dst.points(), std::move(rows));
    ++r.correspondences;
    for (Mask a = 1; a <= src.points().all(); ++a) {
      ++r.checked;
      const bool continuous = is_continuous_on(phi, src, dst, a);
      const Filter nbhd = neighborhood_filter(src, a);
      const Mask img = image(phi, a);
      bool limit = false;
      if (img == 0) {
        ++r.empty_image;
        limit = limit_by_neighborhoods(phi, nbhd, dst, img);
      } else {
        limit = limit_of_correspondence(phi, nbhd, dst, img);
      }
      if (continuous != limit) {
        ++r.disagreements;
        if (!r.first) {
          r.first = "A=" + std::to_string(a) + " phi=" + std::to_string(code) +
                    " continuous=" + std::to_string(continuous);
        }
      }
    }
  }
  return r;
}

}  // namespace

ContinuitySweepStats continuity_sweep(std::size_t src_points, std::size_t dst_points,
                                      ExecPolicy policy) {
  if (src_points * dst_points > 16) {
    fail(ErrorCode::CapacityExceeded, "continuity sweep limited to 16 relation bits");
  }
  const auto src_tops = enumerate_topologies(labelled("p", src_points));
  const auto dst_tops = enumerate_topologies(labelled("q", dst_points));
  const std::size_t pairs = src_tops.size() * dst_tops.size();
  std::vector<PairResult> results(pairs);
  const auto run = [&](std::size_t k) {
    results[k] = sweep_pair(src_tops[k / dst_tops.size()], dst_tops[k % dst_tops.size()]);
  };
  const auto count = static_cast<std::ptrdiff_t>(pairs);
  if (policy == ExecPolicy::parallel) {
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t k = 0; k < count; ++k) run(static_cast<std::size_t>(k));
  } else {
    for (std::ptrdiff_t k = 0; k < count; ++k) run(static_cast<std::size_t>(k));
  }

  ContinuitySweepStats stats;
  stats.topology_pairs = pairs;
  for (std::size_t k = 0; k < pairs; ++k) {
    const auto& r = results[k];
    stats.correspondences += r.correspondences;
    stats.checked += r.checked;
    stats.empty_image += r.empty_image;
    stats.disagreements += r.disagreements;
    if (!stats.first_disagreement && r.first) {
      stats.first_disagreement = "topology pair " + std::to_string(k) + ": " + *r.first;
    }
  }
  return stats;
}

}  // namespace fibra
