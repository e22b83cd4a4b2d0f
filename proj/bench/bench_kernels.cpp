// Serial vs OpenMP propagation kernels on random sparse graphs.
//   bench_kernels [--n 1000,4000,16000] [--q 32] [--degree 8] [--reps 5] [--csv out.csv]

#include <CLI11.hpp>
#include <omp.h>

#include <chrono>
#include <fstream>
#include <iostream>

#include "hidnet/dataset.hpp"
#include "hidnet/kernels.hpp"
#include "hidnet/rng.hpp"

using namespace hidnet;

namespace {

template <class F>
double best_of(int reps, F&& f) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"serial vs OpenMP kernel benchmark"};
  std::vector<int> sizes{1000, 4000, 16000};
  int q = 32, reps = 5;
  double degree = 8.0;
  std::string csv;
  app.add_option("--n", sizes)->delimiter(',');
  app.add_option("--q", q);
  app.add_option("--degree", degree);
  app.add_option("--reps", reps);
  app.add_option("--csv", csv);
  CLI11_PARSE(app, argc, argv);

  std::ofstream file;
  if (!csv.empty()) file.open(csv);
  std::ostream& out = csv.empty() ? std::cout : file;
  out << "kernel,n,q,threads,serial_s,omp_s,speedup,max_abs_diff\n";

  for (int n : sizes) {
    const Graph g = random_sparse_graph(n, degree, 7);
    const NormalizedOperator op = normalize(g);
    Rng rng(11);
    FeatureMatrix x(n, q), x0(n, q);
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      x.data()[i] = rng.normal();
      x0.data()[i] = rng.normal();
    }
    const StepCoefficients c{0.2, 0.08, 0.504, 0.216};
    FeatureMatrix a(n, q), b(n, q);

    const double s1 = best_of(reps, [&] { kernels::serial::spmm(op.a_hat, x, a); });
    const double p1 = best_of(reps, [&] { kernels::omp::spmm(op.a_hat, x, b); });
    out << "spmm," << n << ',' << q << ',' << omp_get_max_threads() << ',' << s1 << ',' << p1 << ','
        << s1 / p1 << ',' << (a - b).cwiseAbs().maxCoeff() << '\n';

    const double s2 = best_of(reps, [&] {
      kernels::serial::fused_step(op.a_hat, &op.a_hat_sq, x, &x0, {&c, 1}, a);
    });
    const double p2 = best_of(reps, [&] {
      kernels::omp::fused_step(op.a_hat, &op.a_hat_sq, x, &x0, {&c, 1}, b);
    });
    out << "fused_step," << n << ',' << q << ',' << omp_get_max_threads() << ',' << s2 << ',' << p2
        << ',' << s2 / p2 << ',' << (a - b).cwiseAbs().maxCoeff() << '\n';
  }
  return 0;
}
