#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace iglab {

using Engine = std::mt19937_64;

/// SplitMix64 finalizer; used to derive independent keys from (key, counter).
constexpr std::uint64_t mix64(std::uint64_t z)
{
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t hash_tag(std::string_view tag)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : tag) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

/**
 * A keyed random stream.
 *
 * The key is a pure function of the master seed and the chain of child
 * tags, so every engine handed out is reproducible. Monte Carlo work is
 * split over a fixed number of substreams; substream i always draws from
 * the engine keyed (key, i) regardless of how many worker threads run it.
 */
class RandomStream
{
public:
    explicit RandomStream(std::uint64_t seed, int substreams = 8, int jobs = 1);

    RandomStream child(std::string_view tag) const;
    RandomStream child(std::uint64_t index) const;

    /// Engine for sequential use (the stream's own draw sequence).
    Engine engine() const;
    Engine substream_engine(int index) const;

    std::uint64_t key() const { return key_; }
    int substreams() const { return substreams_; }
    int jobs() const { return jobs_; }

    RandomStream with_jobs(int jobs) const;

private:
    RandomStream(std::uint64_t key, int substreams, int jobs, bool /*raw*/)
        : key_(key), substreams_(substreams), jobs_(jobs)
    {
    }

    std::uint64_t key_;
    int substreams_;
    int jobs_;
};

/// Standard normal draw; libstdc++'s normal_distribution is deterministic per platform.
inline double standard_normal(Engine& eng)
{
    return std::normal_distribution<double>(0.0, 1.0)(eng);
}

inline double uniform01(Engine& eng)
{
    return std::uniform_real_distribution<double>(0.0, 1.0)(eng);
}

}  // namespace iglab
