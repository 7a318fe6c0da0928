#include <benchmark/benchmark.h>

#include "ratecert/certify.hpp"
#include "ratecert/model.hpp"
#include "ratecert/sdp.hpp"
#include "ratecert/supply.hpp"

namespace rc = ratecert;

namespace {

rc::AlgorithmModel gd_model(double m, double L, double eta) {
  const auto spec = rc::AlgorithmSpec::gradient_descent(eta);
  return rc::build_algorithm(spec).with_oracles(
      rc::default_oracle_classes(spec, rc::OracleKind::Sector, m, L));
}

void BM_CertifyGd(benchmark::State& state) {
  const double m = 1.0, L = 10.0;
  const auto model = gd_model(m, L, 2.0 / (L + m));
  for (auto _ : state) {
    auto result = rc::certify_rate(model, 0, rc::CertifyOptions{});
    benchmark::DoNotOptimize(result);
  }
}
BENCHMARK(BM_CertifyGd)->Unit(benchmark::kMillisecond);

void BM_CertifyNesterovF(benchmark::State& state) {
  const double kappa = state.range(0);
  const double m = 1.0 / kappa, L = 1.0;
  const auto spec = rc::AlgorithmSpec::nesterov_default_tuning(m, L);
  const auto model = rc::build_algorithm(spec).with_oracles(
      rc::default_oracle_classes(spec, rc::OracleKind::SmoothStronglyConvex, m, L));
  for (auto _ : state) {
    auto result = rc::certify_rate(model, 1, rc::CertifyOptions{});
    benchmark::DoNotOptimize(result);
  }
}
BENCHMARK(BM_CertifyNesterovF)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_SolveFeasibilityProbe(benchmark::State& state) {
  const auto model = gd_model(1.0, 10.0, 2.0 / 11.0);
  for (auto _ : state) {
    auto program = rc::assemble_program(model, 0, 0.9);
    auto result = rc::solve_feasibility(program.problem, 1e-9);
    benchmark::DoNotOptimize(result);
  }
}
BENCHMARK(BM_SolveFeasibilityProbe)->Unit(benchmark::kMicrosecond);

void BM_EnumerateRates(benchmark::State& state) {
  const auto spec = rc::AlgorithmSpec::nesterov_default_tuning(0.01, 1.0);
  const auto model = rc::build_algorithm(spec).with_oracles(
      rc::default_oracle_classes(spec, rc::OracleKind::SmoothStronglyConvex, 0.01, 1.0));
  const auto basis = rc::lift(model, 1);
  for (auto _ : state) {
    auto rates = rc::enumerate_supply_rates(model.oracle_classes, basis);
    benchmark::DoNotOptimize(rates);
  }
}
BENCHMARK(BM_EnumerateRates);

}  // namespace

BENCHMARK_MAIN();
