#include <gtest/gtest.h>

#include <atomic>
#include <stdexcept>
#include <vector>

#include "ensel/parallel.hpp"

using ensel::parallel_for;

TEST(ParallelFor, VisitsEveryIndexOnce) {
  for (unsigned jobs : {0u, 1u, 3u, 8u, 64u}) {
    std::vector<std::atomic<int>> hits(257);
    parallel_for(hits.size(), jobs, [&](std::size_t i) { hits[i]++; });
    for (const auto& h : hits) EXPECT_EQ(h.load(), 1);
  }
}

TEST(ParallelFor, EmptyRangeIsANoOp) {
  parallel_for(0, 4, [](std::size_t) { FAIL(); });
}

TEST(ParallelFor, SmallestFailingIndexWins) {
  for (unsigned jobs : {1u, 2u, 7u}) {
    std::atomic<int> ran{0};
    try {
      parallel_for(100, jobs, [&](std::size_t i) {
        ran++;
        if (i == 90 || i == 13 || i == 55) throw std::runtime_error("fail " + std::to_string(i));
      });
      FAIL();
    } catch (const std::runtime_error& e) {
      EXPECT_STREQ(e.what(), "fail 13");
    }
    EXPECT_EQ(ran.load(), 100);
  }
}
