#include "lassodist/random.hpp"

namespace lassodist {

std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

RandomStream::RandomStream(std::uint64_t seed) : engine_(mix64(seed)) {}

RandomStream RandomStream::child(std::uint64_t seed, std::uint64_t index) {
    return RandomStream(mix64(seed) ^ mix64(index + 0x632be59bd9b4e019ULL));
}

double RandomStream::normal() { return normal_(engine_); }

double RandomStream::uniform() { return uniform_(engine_); }

double RandomStream::rademacher() { return (engine_() >> 63) != 0 ? 1.0 : -1.0; }

Eigen::VectorXd RandomStream::normal_vector(Eigen::Index n, double stddev) {
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = stddev * normal();
    return v;
}

}  // namespace lassodist
