#include <catch2/catch_amalgamated.hpp>

#include "gnlbandit/rng.hpp"

using gnl::RngStream;

TEST_CASE("identical (seed, stream, substream) gives identical variates") {
  RngStream a(42, 7, 1);
  RngStream b(42, 7, 1);
  for (int i = 0; i < 64; ++i) REQUIRE(a.next_u64() == b.next_u64());
}

TEST_CASE("streams and substreams are distinct") {
  RngStream base(42, 0, 0);
  RngStream other_stream(42, 1, 0);
  RngStream other_sub(42, 0, 1);
  RngStream other_seed(43, 0, 0);
  int same_stream = 0, same_sub = 0, same_seed = 0;
  for (int i = 0; i < 32; ++i) {
    std::uint64_t v = base.next_u64();
    same_stream += v == other_stream.next_u64();
    same_sub += v == other_sub.next_u64();
    same_seed += v == other_seed.next_u64();
  }
  REQUIRE(same_stream == 0);
  REQUIRE(same_sub == 0);
  REQUIRE(same_seed == 0);
}

TEST_CASE("uniform variates live in [0,1) and look uniform") {
  RngStream rng(2024, 0, 0);
  double total = 0.0;
  for (int i = 0; i < 100000; ++i) {
    double u = rng.next_uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    total += u;
  }
  REQUIRE(total / 100000.0 == Catch::Approx(0.5).margin(0.005));
}

TEST_CASE("the generator is pinned: known outputs for a known seed") {
  // freezes the cross-platform contract; these values must never change
  RngStream rng(1, 2, 3);
  REQUIRE(rng.next_u64() == 0x3064c53251b62548ull);
  REQUIRE(rng.next_u64() == 0xa2d6a8564524d307ull);
  REQUIRE(rng.next_u64() == 0x8d0e04613fbb254dull);
}
