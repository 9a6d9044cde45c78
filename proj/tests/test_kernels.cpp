#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <random>
#include <vector>

#include "cfx/kernels.hpp"
#include "helpers.hpp"

using namespace cfx;

namespace {

struct Arrays {
  std::vector<double> a, b, inv, w;
};

Arrays random_arrays(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  std::uniform_real_distribution<double> pos(0.05, 5.0);
  Arrays r;
  r.a.resize(n);
  r.b.resize(n);
  r.inv.resize(n);
  r.w.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    r.a[i] = u(rng);
    r.b[i] = u(rng);
    r.inv[i] = pos(rng);
    r.w[i] = pos(rng);
  }
  return r;
}

}  // namespace

TEST_CASE("scalar kernels match plain loops") {
  std::mt19937_64 rng(1);
  for (std::size_t n : {0, 1, 2, 3, 5, 8, 17, 64, 257}) {
    Arrays r = random_arrays(n, rng);
    double dot_ref = 0.0, l1_ref = 0.0, wl1_ref = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      dot_ref += r.a[i] * r.b[i];
      l1_ref += std::fabs(r.a[i] - r.b[i]) * r.inv[i];
      wl1_ref += std::fabs(r.a[i] - r.b[i]) * r.inv[i] * r.w[i];
    }
    CHECK(test::rel_err(kernels::scalar::dot(r.a.data(), r.b.data(), n),
                        dot_ref) < 1e-13);
    CHECK(test::rel_err(
              kernels::scalar::scaled_l1(r.a.data(), r.b.data(), r.inv.data(), n),
              l1_ref) < 1e-13);
    CHECK(test::rel_err(kernels::scalar::weighted_scaled_l1(
                            r.a.data(), r.b.data(), r.inv.data(), r.w.data(), n),
                        wl1_ref) < 1e-13);
  }
}

TEST_CASE("dispatched kernels are equivalent to the scalar reference") {
  const kernels::Isa boot = kernels::active_isa();
  INFO("active isa: ", kernels::isa_name(boot));

  for (kernels::Isa isa :
       {kernels::Isa::scalar, kernels::Isa::avx2, kernels::Isa::neon}) {
    if (!kernels::isa_available(isa)) continue;
    REQUIRE(kernels::force_isa(isa));

    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
      const std::size_t n = static_cast<std::size_t>(trial % 33);
      Arrays r = random_arrays(n, rng);

      CHECK(test::rel_err(kernels::dot(r.a.data(), r.b.data(), n),
                          kernels::scalar::dot(r.a.data(), r.b.data(), n)) <
            1e-12);
      CHECK(test::rel_err(
                kernels::scaled_l1(r.a.data(), r.b.data(), r.inv.data(), n),
                kernels::scalar::scaled_l1(r.a.data(), r.b.data(), r.inv.data(),
                                           n)) < 1e-12);
      CHECK(test::rel_err(kernels::weighted_scaled_l1(r.a.data(), r.b.data(),
                                                      r.inv.data(), r.w.data(),
                                                      n),
                          kernels::scalar::weighted_scaled_l1(
                              r.a.data(), r.b.data(), r.inv.data(), r.w.data(),
                              n)) < 1e-12);

      std::vector<double> y1 = r.b, y2 = r.b;
      kernels::axpy(0.37, r.a.data(), y1.data(), n);
      kernels::scalar::axpy(0.37, r.a.data(), y2.data(), n);
      for (std::size_t i = 0; i < n; ++i)
        CHECK(test::rel_err(y1[i], y2[i]) < 1e-12);
    }
  }
  REQUIRE(kernels::force_isa(boot));
}

TEST_CASE("unit weights reproduce the unweighted kernel bitwise on every isa") {
  const kernels::Isa boot = kernels::active_isa();
  for (kernels::Isa isa :
       {kernels::Isa::scalar, kernels::Isa::avx2, kernels::Isa::neon}) {
    if (!kernels::isa_available(isa)) continue;
    REQUIRE(kernels::force_isa(isa));

    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 100; ++trial) {
      const std::size_t n = static_cast<std::size_t>(trial % 29);
      Arrays r = random_arrays(n, rng);
      std::fill(r.w.begin(), r.w.end(), 1.0);
      const double plain =
          kernels::scaled_l1(r.a.data(), r.b.data(), r.inv.data(), n);
      const double weighted = kernels::weighted_scaled_l1(
          r.a.data(), r.b.data(), r.inv.data(), r.w.data(), n);
      CHECK(std::memcmp(&plain, &weighted, sizeof(double)) == 0);
    }
  }
  REQUIRE(kernels::force_isa(boot));
}

TEST_CASE("forcing an unavailable isa is rejected") {
#if !defined(__aarch64__)
  CHECK_FALSE(kernels::force_isa(kernels::Isa::neon));
#else
  CHECK_FALSE(kernels::force_isa(kernels::Isa::avx2));
#endif
  CHECK(kernels::force_isa(kernels::Isa::scalar));
  CHECK(kernels::active_isa() == kernels::Isa::scalar);
  // Restore the default for other assertions in this binary.
  for (kernels::Isa isa : {kernels::Isa::avx2, kernels::Isa::neon})
    if (kernels::isa_available(isa)) kernels::force_isa(isa);
}
