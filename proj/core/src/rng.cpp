#include "latwalk/rng.hpp"

namespace latwalk {

namespace {

std::mt19937_64 make_engine(SeededSource src) {
  std::seed_seq seq{static_cast<std::uint32_t>(src.seed),
                    static_cast<std::uint32_t>(src.seed >> 32), src.stream,
                    0x5bd1e995u};
  return std::mt19937_64(seq);
}

}  // namespace

Rng::Rng(SeededSource src) : engine_(make_engine(src)) {}

}  // namespace latwalk
