// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <array>
#include <bit>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "fibra/error.hpp"
#include "fibra/fibered.hpp"
#include "fibra/group.hpp"
#include "fibra/io.hpp"
#include "fibra/quotient.hpp"
#include "fibra/sweep.hpp"
#include "support/instances.hpp"

using namespace fibra;
namespace t = fibra::testing;

namespace {

const std::string kFixtures = FIBRA_FIXTURES;
const std::string kBinary = FIBRA_BINARY;

class Tally {
 public:
  void expect(bool ok, const std::string& what) {
    ++checks_;
    if (ok) return;
    ++failures_;
    if (first_.empty()) first_ = what;
  }
  std::size_t checks() const { return checks_; }
  std::size_t failures() const { return failures_; }
  const std::string& first() const { return first_; }

 private:
  std::size_t checks_ = 0;
  std::size_t failures_ = 0;
  std::string first_;
};

template <class Fn>
ErrorCode code_of(Fn&& fn, bool& threw) {
  threw = false;
  try {
    fn();
  } catch (const Error& e) {
    threw = true;
    return e.code();
  }
  return ErrorCode::InvariantViolation;
}

io::Universe fixture(const std::string& name) {
  std::ifstream in(kFixtures + "/" + name + ".json");
  std::ostringstream buf;
  buf << in.rdbuf();
  return io::load_text(buf.str());
}

// ---------------------------------------------------------------------------

void theorem_suite(Tally& tally) {
  t::Rng rng(1001);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = t::uniform(rng, 0, 4);
    const auto a = t::random_bundle(rng, "A", n, n, 0, 4);
    const auto b = t::random_bundle(rng, "B", n, n, 0, 4);
    const auto c = t::random_bundle(rng, "C", n, n, 0, 4);
    const auto d = t::random_bundle(rng, "D", n, n, 0, 4);
    const auto f = t::random_fibered(rng, a, b, true);
    const auto h = t::random_fibered(rng, b, c, true);
    const auto g = t::random_fibered(rng, c, d, true);
    const auto hf = fibered_compose(h, f);
    tally.expect(t::as_oracle(hf) == t::oracle_compose(t::as_oracle(h), t::as_oracle(f)),
                 "general: composition differs from the point-set oracle");
    tally.expect(fibered_compose(g, hf) == fibered_compose(fibered_compose(g, h), f),
                 "general: associativity");
    tally.expect(fibered_compose(f, fibered_diagonal(a)) == f, "general: F o D = F");
    tally.expect(fibered_compose(fibered_diagonal(b), f) == f, "general: D o F = F");
    tally.expect(fibered_inverse(fibered_inverse(f)) == f, "general: double inverse");
    tally.expect(fibered_inverse(hf) == fibered_compose(fibered_inverse(f), fibered_inverse(h)),
                 "general: inverse of a composite");
  }
  for (int trial = 0; trial < 1000; ++trial) {
    const auto a = t::random_bundle(rng, "A", 0, 4, 0, 4);
    const auto b = t::random_bundle_over(rng, "B", a.base(), 0, 4);
    const auto c = t::random_bundle_over(rng, "C", a.base(), 0, 4);
    const auto d = t::random_bundle_over(rng, "D", a.base(), 0, 4);
    const bool full = t::coin(rng);
    const auto f = t::random_reduced(rng, a, b, full);
    const auto h = t::random_reduced(rng, b, c, full);
    const auto g = t::random_reduced(rng, c, d, full);
    const auto hf = reduced_compose(h, f);
    tally.expect(reduced_compose(g, hf) == reduced_compose(reduced_compose(g, h), f),
                 "reduced: associativity");
    tally.expect(reduced_compose(f, reduced_diagonal(a)) == f, "reduced: F o D = F");
    tally.expect(reduced_compose(reduced_diagonal(b), f) == f, "reduced: D o F = F");
    tally.expect(reduced_inverse(reduced_inverse(f)) == f, "reduced: double inverse");
    tally.expect(reduced_inverse(hf) == reduced_compose(reduced_inverse(f), reduced_inverse(h)),
                 "reduced: inverse of a composite");
  }
}

void reduced_oracle(Tally& tally) {
  t::Rng rng(1002);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto a = t::random_bundle(rng, "A", 0, 4, 0, 4);
    const auto b = t::random_bundle_over(rng, "B", a.base(), 0, 4);
    const auto c = t::random_bundle_over(rng, "C", a.base(), 0, 4);
    const auto f = t::random_reduced(rng, a, b);
    const auto h = t::random_reduced(rng, b, c);
    tally.expect(t::as_oracle(reduced_compose(h, f)) ==
                     t::oracle_compose(t::as_oracle(h), t::as_oracle(f)),
                 "reduced_compose differs from per-fiber composition");
  }
}

void continuity_equivalence(Tally& tally) {
  for (std::size_t n = 1; n <= 3; ++n) {
    for (std::size_t m = 1; m <= 3; ++m) {
      const auto stats = continuity_sweep(n, m, ExecPolicy::parallel);
      const std::size_t tops[] = {0, 1, 4, 29};
      const std::size_t expected_checks =
          tops[n] * tops[m] * (std::size_t{1} << (n * m)) * ((std::size_t{1} << n) - 1);
      tally.expect(stats.checked == expected_checks,
                   std::to_string(n) + "x" + std::to_string(m) + ": sweep was not exhaustive");
      tally.expect(stats.disagreements == 0,
                   std::to_string(n) + "x" + std::to_string(m) + ": " +
                       stats.first_disagreement.value_or("disagreement"));
    }
  }
}

void image_theorem(Tally& tally) {
  t::Rng rng(1004);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = t::uniform(rng, 1, 4);
    const auto a = t::random_bundle(rng, "A", n, n, 1, 3, true);
    const auto b = t::random_bundle(rng, "B", n, n, 1, 3, true);
    const auto base = t::random_injection(rng, a.base(), b.base());
    const auto typical =
        t::random_relation(rng, a.trivialization()->typical, b.trivialization()->typical);
    std::map<BasePair, Correspondence> fibers;
    for (const auto& [x, y] : base.pairs()) {
      std::vector<Mask> rows(a.fiber(x).size(), 0);
      for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < b.fiber(y).size(); ++j)
          if (typical.relates(a.chart(x)[i], b.chart(y)[j])) rows[i] |= bit(j);
      fibers.emplace(BasePair{x, y}, Correspondence(a.fiber(x), b.fiber(y), std::move(rows)));
    }
    const FiberedCorrespondence f(a, b, base, std::move(fibers));
    try {
      tally.expect(is_subbundle(image_of_subbundle(f, is_subbundle(a, a)), b).valid(),
                   "image is not a subbundle");
    } catch (const Error& e) {
      tally.expect(false, std::string("chart-uniform image refused: ") + e.what());
    }
  }

  const auto u = fixture("bundles");
  const auto& singular = u.fibered.at("singular");
  const auto& s = u.bundles.at("S");
  tally.expect(singular.source() == s, "singular fixture is not over S");
  bool threw = false;
  const auto code = code_of([&] { image_of_subbundle(singular, is_subbundle(s, s)); }, threw);
  tally.expect(threw && code == ErrorCode::SingularFiber, "singular fixture was not refused");
  const auto& uniform = u.fibered.at("uniform");
  tally.expect(is_subbundle(image_of_subbundle(uniform, is_subbundle(s, s)), uniform.target()).valid(),
               "uniform fixture image is not a subbundle");
}

void quotient_factorization(Tally& tally) {
  t::Rng rng(1005);
  for (int trial = 0; trial < 500; ++trial) {
    const auto a = t::random_bundle(rng, "A", 0, 4, 0, 4);
    const auto b = t::random_bundle_over(rng, "B", a.base(), 1, 4);
    const auto f = t::random_morphism(rng, a, b);
    const auto [j, tt, i] = factorize(f);
    bool pointwise = true;
    for (std::size_t x = 0; x < f.maps().size(); ++x)
      for (std::size_t e = 0; e < f.maps()[x].size(); ++e)
        pointwise = pointwise && i(x, tt(x, j(x, e))) == f(x, e);
    tally.expect(pointwise, "i t j differs from f");
    tally.expect(j.surjective(), "j is not surjective");
    tally.expect(tt.bijective(), "t is not bijective");
    tally.expect(i.injective(), "i is not injective");
    tally.expect(j.source() == f.source() && i.target() == f.target(), "factor ends");
    // j lands on the classes of the kernel
    const auto q = quotient_bundle(a, kernel_equivalence(f));
    tally.expect(j.target() == q.quotient, "j does not map onto the kernel classes");
    tally.expect(classify(kernel_equivalence(f)).equivalence, "kernel is not an equivalence");
  }

  // finest quotient topology by brute force over all topologies on E/S
  std::size_t instances = 0;
  for (int trial = 0; instances < 40; ++trial) {
    const auto shape = t::random_bundle(rng, "E", 1, 3, 1, 3);
    const auto total = shape.total_space();
    if (total.set.size() > 6) continue;
    const auto base_tops = enumerate_topologies(shape.base());
    const auto& base_top = base_tops[t::uniform(rng, 0, base_tops.size() - 1)];
    const auto total_tops = enumerate_topologies(total.set);
    const auto& total_top = total_tops[t::uniform(rng, 0, total_tops.size() - 1)];
    const Bundle e(shape.name(), shape.base(), shape.fibers(), std::nullopt, base_top, total_top);
    const auto b = t::random_bundle_over(rng, "B", e.base(), 1, 2);
    const auto q = quotient_bundle(e, kernel_equivalence(t::random_morphism(rng, e, b)));
    if (!q.quotient_topology) {
      tally.expect(false, "quotient topology missing");
      continue;
    }
    const auto nat = q.nat.total_map();
    const auto& qtop = *q.quotient_topology;
    tally.expect(is_continuous_map(nat, total_top, qtop), "nat is not continuous");
    bool finest = true;
    for (const auto& cand : enumerate_topologies(qtop.points())) {
      if (!is_continuous_map(nat, total_top, cand)) continue;
      for (Mask v : cand.opens()) finest = finest && qtop.is_open(v);
    }
    tally.expect(finest, "a finer topology keeps nat continuous");
    ++instances;
  }
}

void group_actions(Tally& tally) {
  t::Rng rng(1006);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = t::uniform(rng, 1, 4);
    const auto rep = t::random_cyclic_rep(rng, n, 1, 3, 3, t::coin(rng, 0.3));
    const auto& space = rep.space();
    const std::size_t m = space.base().size();

    for (std::size_t x = 0; x < m; ++x)
      for (std::size_t e = 0; e < space.fiber(x).size(); ++e)
        tally.expect(rep.group().is_subgroup(stabilizer(rep, x, e)), "stabilizer is no subgroup");

    if (section_count(space) > 0 && section_count(space) <= 64) {
      const auto secs = sections(space);
      const auto& h = secs[t::uniform(rng, 0, secs.size() - 1)];
      const auto little = little_group(rep, h);
      std::size_t expected = 1;
      for (std::size_t x = 0; x < m; ++x) {
        const Mask st = stabilizer(rep, x, h.choice[x]);
        expected *= static_cast<std::size_t>(std::popcount(st));
        for (const auto& g : little)
          tally.expect((st >> g[x]) & 1, "little-group value outside the stabilizer");
      }
      tally.expect(little.size() == expected, "little group is not the product of stabilizers");
    }

    const auto oq = orbit_quotient(rep);
    bool all_full = true;
    for (const auto& cls : oq.quotient.classes)
      for (Mask c : cls) all_full = all_full && static_cast<std::size_t>(std::popcount(c)) == n;
    tally.expect(oq.free == is_free(rep), "orbit_quotient disagrees with is_free");
    tally.expect(oq.free == all_full, "free differs from all orbits of size |G|");
    std::size_t classes = 0;
    for (const auto& cls : oq.quotient.classes) classes += cls.size();
    if (oq.free) {
      tally.expect(oq.bijections.size() == classes, "missing orbit bijections");
      for (const auto& bj : oq.bijections) {
        const std::size_t start = space.fiber(bj.point).index_of(bj.label);
        Mask hit = 0;
        for (std::size_t g = 0; g < n; ++g) {
          tally.expect(bj.element_of[g] == rep.act(bj.point, g, start), "bijection is not g.label");
          hit |= bit(bj.element_of[g]);
        }
        tally.expect(std::popcount(hit) == static_cast<int>(n), "bijection is not injective");
      }
    } else {
      tally.expect(!oq.degenerate.empty(), "non-free action without degenerate classes");
    }
  }

  const auto u = fixture("groups");
  const auto oq = orbit_quotient(u.representations.at("fixed_point"));
  tally.expect(!oq.free, "fixed-point fixture is free");
  const bool flagged = oq.degenerate.size() == 1 && oq.degenerate[0].size == 1;
  tally.expect(flagged, "fixed point is not a single flagged size-1 class");
  tally.expect(oq.quotient.quotient.base().size() == 1, "fixed-point fixture has one base point");
}

void diagonal_lift(Tally& tally) {
  t::Rng rng(1007);
  for (int trial = 0; trial < 500; ++trial) {
    const auto a = t::random_bundle(rng, "A", 0, 4, 0, 4);
    const auto b = t::random_bundle_over(rng, "B", a.base(), 0, 4);
    const auto c = t::random_bundle_over(rng, "C", a.base(), 0, 4);
    const auto f = t::random_reduced(rng, a, b);
    const auto h = t::random_reduced(rng, b, c);
    tally.expect(reduce(lift_of_diagonal(f)) == f, "round trip");
    tally.expect(lift_of_diagonal(reduced_compose(h, f)) ==
                     fibered_compose(lift_of_diagonal(h), lift_of_diagonal(f)),
                 "composition");
    tally.expect(lift_of_diagonal(reduced_inverse(f)) == fibered_inverse(lift_of_diagonal(f)),
                 "inverse");
    tally.expect(lift_of_diagonal(reduced_diagonal(a)) == fibered_diagonal(a), "diagonal");
  }
}

struct Run {
  int status = -1;
  std::string out;
};

Run run(const std::string& args) {
  Run r;
  const std::string cmd = "'" + kBinary + "' " + args + " 2>/dev/null";
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  std::size_t got = 0;
  while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
  const int raw = ::pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

void cli_determinism(Tally& tally) {
  const std::vector<std::pair<std::string, std::string>> corpus{
      {"relations", "emit"},
      {"relations", "compose psi phi"},
      {"relations", "inverse phi"},
      {"relations", "image phi X"},
      {"relations", "continuity phi indiscrete_xy discrete_uv --on x"},
      {"relations", "continuity phi discrete_xy indiscrete_uv"},
      {"relations", "homomorphism shift z2 z2"},
      {"bundles", "emit"},
      {"bundles", "compose H F"},
      {"bundles", "inverse F"},
      {"bundles", "image uniform S"},
      {"bundles", "image singular S"},
      {"bundles", "check chain --property transitive"},
      {"bundles", "classify diagonal"},
      {"bundles", "classify between"},
      {"bundles", "quotient Digits parity"},
      {"bundles", "factorize collapse"},
      {"bundles", "sections section_rel"},
      {"bundles", "tower single"},
      {"bundles", "tower broken"},
      {"groups", "emit"},
      {"groups", "orbits swap"},
      {"groups", "orbits fixed_point"},
      {"groups", "orbits free"},
      {"groups", "little-group swap --section r,p"},
      {"dangling", "emit"},
      {"malformed", "emit"},
  };
  for (const auto& [file, args] : corpus) {
    const std::string line = "-u '" + kFixtures + "/" + file + ".json' " + args;
    const auto first = run(line);
    const auto second = run(line);
    tally.expect(first.status == 0 || first.status == 2, file + ": " + args + " exit status");
    tally.expect(!first.out.empty(), file + ": " + args + " printed nothing");
    tally.expect(first.status == second.status && first.out == second.out,
                 file + ": " + args + " is not byte-identical across runs");
  }

  const auto dir = std::filesystem::temp_directory_path() /
                   ("fibra-acceptance-" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  for (const char* file : {"relations", "bundles", "groups", "empty"}) {
    const auto once = run("-u '" + kFixtures + "/" + file + ".json' emit");
    const auto path = dir / (std::string(file) + ".json");
    std::ofstream(path) << once.out;
    const auto twice = run("-u '" + path.string() + "' emit");
    tally.expect(once.status == 0 && twice.status == 0, std::string(file) + ": emit failed");
    tally.expect(once.out == twice.out, std::string(file) + ": emit is not a fixed point");
  }
  std::filesystem::remove_all(dir);
}

struct Criterion {
  const char* name;
  double limit_seconds;
  std::function<void(Tally&)> body;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"1 theorem suite (general and reduced laws, 2x1000 instances)", 10.0, theorem_suite},
      {"2 reduced_compose vs per-fiber oracle (1000 instances)", 5.0, reduced_oracle},
      {"3 continuity on a set vs filter limit (all topologies, <=3 points)", 60.0,
       continuity_equivalence},
      {"4 image of a subbundle and the singular fixture", 1.0, image_theorem},
      {"5 quotient and factorization (500 morphisms, finest topology)", 30.0,
       quotient_factorization},
      {"6 group actions and the fixed-point fixture", 10.0, group_actions},
      {"7 diagonal lift functor (500 instances)", 5.0, diagonal_lift},
      {"8 CLI determinism and emit round trip", 5.0, cli_determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Tally tally;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.body(tally);
    } catch (const std::exception& e) {
      tally.expect(false, std::string("uncaught: ") + e.what());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs < c.limit_seconds;
    const bool ok = tally.failures() == 0 && tally.checks() > 0 && in_time;
    failed += ok ? 0 : 1;
    std::printf("%s  %-68s %8.3fs / %5.1fs  %zu checks", ok ? "PASS" : "FAIL", c.name, secs,
                c.limit_seconds, tally.checks());
    if (tally.failures() > 0)
      std::printf("  %zu failed, first: %s", tally.failures(), tally.first().c_str());
    if (!in_time) std::printf("  over the time limit");
    std::printf("\n");
    std::fflush(stdout);
  }
  std::printf("%s: %zu/%zu criteria passed\n", failed == 0 ? "ACCEPTED" : "REJECTED",
              criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
