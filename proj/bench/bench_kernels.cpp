// Wall-clock comparison of the per-sample serial reference kernels and the
// blocked OpenMP kernels.

#include <chrono>
#include <cstdio>
#include <functional>
#include <vector>

#include <CLI11.hpp>
#include <omp.h>

#include "swarmplan/dataset.hpp"
#include "swarmplan/kernels.hpp"
#include "swarmplan/rng.hpp"
#include "swarmplan/train.hpp"

using namespace swarmplan;

namespace {

double best_of(int repeats, const std::function<void()>& fn) {
  double best = 1e300;
  for (int r = 0; r < repeats; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

void row(const char* name, double serial, double parallel, bool same) {
  std::printf("%-22s %12.6f %12.6f %8.2fx  %s\n", name, serial, parallel, serial / parallel,
              same ? "match" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Serial vs OpenMP kernel timings"};
  int threads = omp_get_max_threads();
  int batch = 4096;
  int scenarios = 200;
  int repeats = 5;
  app.add_option("--threads", threads, "OpenMP threads")->capture_default_str();
  app.add_option("--batch", batch, "columns per forward/gradient batch")->capture_default_str();
  app.add_option("--scenarios", scenarios, "di2d-1 scenarios to plan")->capture_default_str();
  app.add_option("--repeats", repeats, "timed repetitions; the best is reported")->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  const Family fam = Family::Di2dSingle;
  Mlp net = init_mlp(layer_stack(input_size(fam), 4, 100, target_size(fam)), 1);
  Rng rng(2);
  Eigen::MatrixXd x(net.input_size(), batch), y(net.output_size(), batch);
  for (Eigen::Index k = 0; k < x.size(); ++k) x.data()[k] = rng.normal();
  for (Eigen::Index k = 0; k < y.size(); ++k) y.data()[k] = rng.normal();
  std::vector<std::uint64_t> seeds(static_cast<std::size_t>(batch));
  for (auto& s : seeds) s = rng.next_u64();

  std::printf("threads %d, batch %d, scenarios %d\n", threads, batch, scenarios);
  std::printf("%-22s %12s %12s %9s\n", "kernel", "serial [s]", "openmp [s]", "speedup");

  Eigen::MatrixXd fs, fp;
  const double f_serial = best_of(repeats, [&] { fs = forward_batch_serial(net, x); });
  const double f_parallel = best_of(repeats, [&] { fp = forward_batch_parallel(net, x, threads); });
  row("forward_batch", f_serial, f_parallel, fs.isApprox(fp, 1e-12));

  BatchGradient gs, gp;
  const double g_serial = best_of(repeats, [&] { gs = batch_gradient_serial(net, x, y, seeds, kTargetKnots); });
  const double g_parallel =
      best_of(repeats, [&] { gp = batch_gradient_parallel(net, x, y, seeds, kTargetKnots, threads); });
  bool g_same = std::abs(gs.loss - gp.loss) <= 1e-12 * std::abs(gs.loss);
  for (std::size_t l = 0; l < gs.grad.dw.size(); ++l) g_same = g_same && gs.grad.dw[l].isApprox(gp.grad.dw[l], 1e-10);
  row("batch_gradient", g_serial, g_parallel, g_same);

  std::vector<Scenario> sc;
  for (int k = 0; k < scenarios; ++k) sc.push_back(sample_scenario(fam, static_cast<std::uint64_t>(k)));
  std::vector<PlanResult> ps, pp;
  const double p_serial = best_of(1, [&] { ps = plan_batch_serial(sc, ScpParams{}); });
  const double p_parallel = best_of(1, [&] { pp = plan_batch_parallel(sc, ScpParams{}, threads); });
  bool same = ps.size() == pp.size();
  for (std::size_t k = 0; same && k < ps.size(); ++k) same = ps[k].fuel == pp[k].fuel && ps[k].status == pp[k].status;
  row("plan_batch", p_serial, p_parallel, same);
  return 0;
}
