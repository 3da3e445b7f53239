#include <doctest.h>

#include "grad_instances.hpp"

namespace {

void run(const char* name, fdcheck::Result (*check)(std::uint64_t), int n = 8) {
  for (int i = 0; i < n; ++i) {
    auto r = check(static_cast<std::uint64_t>(i) + 1);
    INFO(name, " instance ", i, ": max rel ", r.max_rel, " over ", r.scalars,
         " scalars");
    CHECK(r.max_rel <= 1e-5);
    CHECK(r.scalars > 0);
  }
}

}  // namespace

TEST_SUITE("nn") {

TEST_CASE("dense backward matches central finite differences") {
  run("dense", gradcheck::check_dense);
}

TEST_CASE("conv1d backward matches central finite differences") {
  run("conv1d", gradcheck::check_conv);
}

TEST_CASE("deconv1d backward matches central finite differences") {
  run("deconv1d", gradcheck::check_deconv);
}

TEST_CASE("pooling backwards match central finite differences") {
  run("avg_pool1d", gradcheck::check_avg_pool);
  run("avg_unpool1d", gradcheck::check_avg_unpool);
  run("max_pool1d", gradcheck::check_max_pool);
  run("max_unpool1d", gradcheck::check_max_unpool);
}

TEST_CASE("mse gradient matches central finite differences") {
  run("mse", gradcheck::check_mse);
}

}  // TEST_SUITE
