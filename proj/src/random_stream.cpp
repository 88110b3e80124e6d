#include "bellrmt/random_stream.hpp"

namespace bellrmt {
namespace {

std::mt19937_64 seeded_engine(std::uint64_t master_seed, std::uint64_t stream_index) {
    const std::uint64_t a = mix64(master_seed);
    const std::uint64_t b = mix64(stream_index ^ 0xd1b54a32d192ed03ULL);
    std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                      static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
    return std::mt19937_64(seq);
}

}  // namespace

RandomStream::RandomStream(std::uint64_t master_seed, std::uint64_t stream_index)
    : master_seed_(master_seed), stream_index_(stream_index), engine_(seeded_engine(master_seed, stream_index)) {}

std::uint64_t RandomStream::below(std::uint64_t n) {
    // Lemire multiply-shift with rejection.
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
        const std::uint64_t x = engine_();
        __extension__ using u128 = unsigned __int128;
        const u128 m = static_cast<u128>(x) * n;
        if (static_cast<std::uint64_t>(m) >= threshold) return static_cast<std::uint64_t>(m >> 64);
    }
}

}  // namespace bellrmt
