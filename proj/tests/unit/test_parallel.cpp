#include <gtest/gtest.h>

#include <atomic>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "tvl/parallel.hpp"

namespace tvl {
namespace {

TEST(ParallelFor, VisitsEveryIndexOnce) {
  for (int workers : {1, 2, 4, 7}) {
    std::vector<std::atomic<int>> hits(103);
    parallel_for(hits.size(), [&](std::size_t i) { ++hits[i]; }, workers);
    for (const auto& h : hits) EXPECT_EQ(h.load(), 1) << workers;
  }
}

TEST(ParallelFor, ResultsIndependentOfWorkerCount) {
  std::vector<double> a(64), b(64);
  auto work = [](std::size_t i) { return std::sqrt(static_cast<double>(i)) * 1.5; };
  parallel_for(a.size(), [&](std::size_t i) { a[i] = work(i); }, 1);
  parallel_for(b.size(), [&](std::size_t i) { b[i] = work(i); }, 4);
  EXPECT_EQ(a, b);
}

TEST(ParallelFor, NestedCallsRunInline) {
  std::atomic<int> total{0};
  parallel_for(4, [&](std::size_t) { parallel_for(5, [&](std::size_t) { ++total; }, 4); }, 4);
  EXPECT_EQ(total.load(), 20);
}

TEST(ParallelFor, RethrowsTaskFailure) {
  EXPECT_THROW(parallel_for(
                   50,
                   [](std::size_t i) {
                     if (i == 17) throw std::runtime_error("boom");
                   },
                   3),
               std::runtime_error);
  EXPECT_THROW(parallel_for(3, [](std::size_t) { throw std::logic_error("x"); }, 1), std::logic_error);
}

TEST(ParallelFor, EmptyRangeIsNoOp) {
  int calls = 0;
  parallel_for(0, [&](std::size_t) { ++calls; }, 4);
  EXPECT_EQ(calls, 0);
}

TEST(WorkerCount, AtLeastOne) { EXPECT_GE(worker_count(), 1); }

}  // namespace
}  // namespace tvl
